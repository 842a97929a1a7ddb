"""Tests for the arithmetic substrate: quadrature, Newton, log-gamma,
precision plumbing."""
from __future__ import annotations

import random
from fractions import Fraction

import mpmath as mp
import pytest

from legasym import numerics
from legasym.numerics import (
    DomainError,
    RootNotFoundError,
    frac_to_mp,
    log_gamma,
    newton_solve,
    quad_adaptive,
)


def osc_integrand(a):
    """sqrt(a^2 - t^2) / (1 - t^2), the oscillatory-region phase density."""
    return lambda t: mp.sqrt((a - t) * (a + t)) / ((1 - t) * (1 + t))


def mono_integrand(a):
    """sqrt(t^2 - a^2) / (1 - t^2), the monotonic-region phase density."""
    return lambda t: mp.sqrt((t - a) * (t + a)) / ((1 - t) * (1 + t))


def xi_closed(a, x):
    """Closed form of int_a^x sqrt(t^2-a^2)/(1-t^2) dt for a < x < 1."""
    A = mp.sqrt((1 - a) * (1 + a))
    X = mp.sqrt((x - a) * (x + a))
    return A * mp.atanh(X / (x * A)) - mp.acosh(x / a)


def test_quad_polynomial_exact():
    val = quad_adaptive(lambda t: t * t, 0, 1, mp.mpf("1e-30"))
    assert abs(val - mp.mpf(1) / 3) < mp.mpf("1e-30")


def test_quad_oscillatory_closed_form():
    # int_{-a}^{a} sqrt(a^2-t^2)/(1-t^2) dt = pi (1 - sqrt(1-a^2))
    a = mp.mpf("0.8")
    val = quad_adaptive(osc_integrand(a), -a, a, mp.mpf("1e-30"))
    assert abs(val - mp.pi * (1 - mp.mpf("0.6"))) < mp.mpf("1e-28")


def test_quad_monotonic_closed_form():
    a = mp.mpf("0.5")
    x = mp.mpf("0.9")
    val = quad_adaptive(mono_integrand(a), a, x, mp.mpf("1e-30"))
    assert abs(val - xi_closed(a, x)) < mp.mpf("1e-28")


def test_quad_oscillatory_random_a():
    rng = random.Random(20260815)
    for _ in range(50):
        a = mp.mpf("0.05") + mp.mpf("0.9") * mp.mpf(rng.random())
        val = quad_adaptive(osc_integrand(a), -a, a, mp.mpf("1e-30"))
        exact = mp.pi * (1 - mp.sqrt((1 - a) * (1 + a)))
        assert abs(val - exact) < mp.mpf("1e-28"), f"a={mp.nstr(a, 10)}"


def test_newton_square_root():
    root = newton_solve(lambda t: t * t - 2, lambda t: 2 * t, mp.mpf("1.5"),
                        mp.mpf("1e-38"))
    assert abs(root - mp.sqrt(2)) < mp.mpf("1e-37")


def test_newton_triple_root_linear_convergence():
    # f(t) = t^3 has f'(root) = 0; Newton contracts by 2/3 per step and must
    # still land inside the residual tolerance within the iteration budget.
    root = newton_solve(lambda t: t ** 3, lambda t: 3 * t * t, mp.mpf("1.5"),
                        mp.mpf("1e-36"))
    assert abs(root) ** 3 <= mp.mpf("1e-36")


def test_newton_bisection_fallback():
    # sign(t) sqrt(|t|) makes the plain Newton step overshoot forever
    # (x -> -x); the documented sign-change fallback must rescue it.
    def f(t):
        return mp.sign(t) * mp.sqrt(abs(t))

    def fp(t):
        return 1 / (2 * mp.sqrt(abs(t))) if t != 0 else mp.mpf(1)

    root = newton_solve(f, fp, mp.mpf(1), mp.mpf("1e-20"))
    assert abs(f(root)) <= mp.mpf("1e-20")


def test_newton_divergence_reports_last_iterate():
    with pytest.raises(RootNotFoundError) as info:
        newton_solve(lambda t: t * t + 1, lambda t: 2 * t, mp.mpf(1),
                     mp.mpf("1e-30"))
    assert info.value.last is not None


def test_newton_vs_bisection_on_phase_equation():
    # Solve xi_closed(a, x) = xi_closed(a, 0.9) for x two ways.
    a = mp.mpf("0.5")
    target = xi_closed(a, mp.mpf("0.9"))

    def f(x):
        return xi_closed(a, x) - target

    # Start close enough that no Newton step leaves (a, 1), where the
    # closed form turns complex.
    newton = newton_solve(f, lambda x: mono_integrand(a)(x), mp.mpf("0.85"),
                          mp.mpf("1e-36"))
    lo, hi = mp.mpf("0.55"), mp.mpf("0.95")
    for _ in range(150):
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    assert abs(newton - (lo + hi) / 2) < mp.mpf("1e-25")
    assert abs(newton - mp.mpf("0.9")) < mp.mpf("1e-25")


def test_log_gamma_known_values():
    assert log_gamma(1) == 0
    assert log_gamma(2) == 0
    assert abs(log_gamma(mp.mpf("0.5")) - mp.log(mp.sqrt(mp.pi))) < mp.mpf("1e-39")


def test_log_gamma_recurrence():
    # ln Gamma(x) = ln Gamma(x+20) - sum_{k=0}^{19} ln(x+k)
    x = mp.mpf("94.734283")
    lhs = log_gamma(x)
    rhs = log_gamma(x + 20) - mp.fsum(mp.log(x + k) for k in range(20))
    assert abs(lhs - rhs) < mp.mpf("1e-28")


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        log_gamma(0)
    with pytest.raises(DomainError):
        log_gamma(-3)


def test_set_digits_floor():
    with pytest.raises(DomainError):
        numerics.set_digits(9)
    numerics.set_digits(25)
    assert numerics.digits() == 25


def test_precision_contexts_restore():
    base = numerics.digits()
    with numerics.workdps(base + 30):
        assert numerics.digits() == base + 30
        with numerics.extradps(5):
            assert numerics.digits() == base + 35
    assert numerics.digits() == base


def test_precision_monotonicity():
    # A 40-digit result agrees with its 50-digit refinement far below the
    # 40-digit noise floor.
    a = mp.mpf("0.37")
    v40 = quad_adaptive(osc_integrand(a), -a, a, mp.mpf("1e-36"))
    with numerics.workdps(50):
        v50 = quad_adaptive(osc_integrand(a), -a, a, mp.mpf("1e-46"))
    assert abs(v40 - v50) < mp.mpf("1e-35")


def test_frac_to_mp():
    assert abs(frac_to_mp(Fraction(1, 3)) - mp.mpf(1) / 3) < mp.mpf("1e-39")
    assert frac_to_mp(Fraction(-7, 4)) == mp.mpf("-1.75")
