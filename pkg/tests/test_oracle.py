"""Tests for the reference oracles: closed-form pins, series/ODE dual
routes, Wronskian structure, and coefficient extraction by exact inversion."""
from __future__ import annotations

import random

import mpmath as mp
import pytest

from legasym import legendre, numerics, oracle, tpgeom
from legasym.numerics import DomainError
from legasym.oracle import (
    ab_exact_ref,
    ferrers_P_prime_ref,
    ferrers_P_ref,
    ferrers_Q_prime_ref,
    ferrers_Q_ref,
    ferrers_wronskian_ref,
    legendre_ode_P_ref,
    pcf_ode_ref,
    xi_quad_ref,
)
from legasym.pcf import pcf_eval
from legasym.tpgeom import Params, params_from_nu_a, params_from_nu_mu


def test_degree_zero_is_constant():
    p = Params(nu=mp.mpf(0), u=mp.mpf("0.5"), mu=mp.mpf(0))
    for x in ("-0.8", "0.3", "0.9"):
        assert abs(ferrers_P_ref(p, mp.mpf(x)) - 1) < mp.mpf("1e-38"), x


def test_low_degree_polynomials():
    p1 = Params(nu=mp.mpf(1), u=mp.mpf("1.5"), mu=mp.mpf(0))
    p3 = Params(nu=mp.mpf(3), u=mp.mpf("3.5"), mu=mp.mpf(0))
    x = mp.mpf("0.4")
    assert abs(ferrers_P_ref(p1, x) - x) < mp.mpf("1e-38")
    cubic = (5 * x ** 3 - 3 * x) / 2
    assert abs(ferrers_P_ref(p3, x) - cubic) < mp.mpf("1e-37")
    assert abs(legendre_ode_P_ref(p3, x) - cubic) < mp.mpf("1e-30")


def test_domain_guard(p05):
    with pytest.raises(DomainError):
        ferrers_P_ref(p05, 1)
    with pytest.raises(DomainError):
        ferrers_P_ref(p05, mp.mpf("-1.2"))


def test_endpoint_power_law(p05):
    # P decays like (1-x)^(mu/2) as x -> 1.
    e1, e2 = mp.mpf("1e-8"), mp.mpf("4e-8")
    r = ferrers_P_ref(p05, 1 - e1) / ferrers_P_ref(p05, 1 - e2)
    expect = (e1 / e2) ** (p05.mu / 2)
    assert abs(mp.log(r) / mp.log(expect) - 1) < mp.mpf("1e-3")


def test_series_vs_ode_at_fixed_point(p05):
    # Relative split: P itself sits at the tiny normalization scale.
    x = mp.mpf("0.3")
    a = ferrers_P_ref(p05, x)
    b = legendre_ode_P_ref(p05, x)
    assert abs(a - b) < mp.mpf("1e-25") * abs(a)


def test_series_vs_ode_random(p05):
    rng = random.Random(411)
    for _ in range(50):
        x = mp.mpf("-0.9") + mp.mpf("1.8") * mp.mpf(rng.random())
        a = ferrers_P_ref(p05, x)
        b = legendre_ode_P_ref(p05, x)
        assert abs(a - b) < mp.mpf("1e-25") * abs(a), mp.nstr(x, 10)


def test_derivative_channel(p05):
    # The derivative oracle agrees with a central difference of the value
    # oracle computed at boosted precision.
    x = mp.mpf("0.3")
    with numerics.extradps(25):
        h = mp.mpf("1e-15")
        fd = (ferrers_P_ref(p05, x + h) - ferrers_P_ref(p05, x - h)) / (2 * h)
    assert abs(ferrers_P_prime_ref(p05, x) - fd) < mp.mpf("1e-22") * abs(fd)
    with numerics.extradps(25):
        h = mp.mpf("1e-15")
        fdq = (ferrers_Q_ref(p05, x + h) - ferrers_Q_ref(p05, x - h)) / (2 * h)
    assert abs(ferrers_Q_prime_ref(p05, x) - fdq) < mp.mpf("1e-22") * abs(fdq)


def test_wronskian_constant(p05):
    w1 = ferrers_wronskian_ref(p05, mp.mpf("0.2"))
    w2 = ferrers_wronskian_ref(p05, mp.mpf("0.6"))
    assert abs(w1 - w2) < mp.mpf("1e-25") * abs(w1)


def test_q_oscillation_pattern(p05):
    # Q oscillates inside (0, q) and keeps one sign beyond q ~ 0.4254.
    inner = [mp.sign(ferrers_Q_ref(p05, mp.mpf(k) / 100))
             for k in range(5, 41, 5)]
    changes = sum(1 for s0, s1 in zip(inner, inner[1:]) if s0 * s1 < 0)
    assert changes >= 2
    outer = [mp.sign(ferrers_Q_ref(p05, mp.mpf(k) / 100))
             for k in range(45, 91, 5)]
    assert len(set(outer)) == 1
    assert ferrers_Q_ref(p05, mp.mpf("0.42")) * ferrers_Q_ref(p05, mp.mpf("0.43")) < 0


def test_pcf_ode_gaussian():
    for k in range(5):
        x = mp.mpf(3) * k / 4
        val = pcf_ode_ref(mp.mpf("-0.5"), x)
        assert abs(val.U - mp.exp(-x * x / 4)) < mp.mpf("1e-25"), k


def test_pcf_ode_wronskian():
    val = pcf_ode_ref(mp.mpf("1.2"), mp.mpf("0.9"))
    w = val.U * val.Vprime - val.Uprime * val.V
    assert abs(w - mp.sqrt(2 / mp.pi)) < mp.mpf("1e-30")


def test_pcf_ode_vs_series_random():
    rng = random.Random(7341)
    for _ in range(20):
        b = mp.mpf(-5) + 10 * mp.mpf(rng.random())
        x = mp.mpf("2.5") * mp.mpf(rng.random())
        march = pcf_ode_ref(b, x)
        series = pcf_eval(b, x)
        for name in ("U", "Uprime", "V", "Vprime"):
            scale = max(abs(getattr(series, name)), mp.mpf(1))
            d = abs(getattr(march, name) - getattr(series, name))
            assert d < scale * mp.mpf("1e-25"), (name, mp.nstr(b, 8), mp.nstr(x, 8))


def test_ab_exact_reality(p05):
    pair = ab_exact_ref(p05, mp.mpf("0.7"))
    assert abs(mp.im(pair.A)) < mp.mpf("1e-25") * abs(pair.A)
    assert abs(mp.im(pair.B)) < mp.mpf("1e-15") * abs(pair.B)


def test_ab_exact_at_turning_point(p05):
    # Exact inversion agrees with the ring-extracted Taylor route at z = a,
    # where the expansion route is forbidden.
    exact = ab_exact_ref(p05, mp.mpf("0.5"))
    taylor = legendre.ab_taylor(p05, mp.mpf("0.5"), 4)
    assert abs(exact.A - taylor.A) < mp.mpf("1e-10") * abs(exact.A)
    assert abs(exact.B - taylor.B) < mp.mpf("1e-10") * abs(exact.B)


def test_ab_exact_scale_split(p05):
    # B carries the u^-2 correction scale.
    pair = ab_exact_ref(p05, mp.mpf("0.7"))
    assert abs(pair.B / pair.A) < mp.mpf("1e-4")


def test_ab_exact_degenerate_order():
    # nu - mu = 7 drives the reflection route for Q through its integer
    # limit; the exact inversion must still match the expansion.
    p = params_from_nu_mu(50, 43)
    exact = ab_exact_ref(p, mp.mpf("0.8"))
    pair = legendre.ab_expansion(p, mp.mpf("0.8"), 4)
    assert abs(exact.A - pair.A) < mp.mpf("1e-12") * abs(exact.A)
    assert abs(exact.B - pair.B) < mp.mpf("1e-12") * abs(exact.B)


def test_xi_quad_both_regions(p05):
    a = p05.a
    mono = xi_quad_ref(a, mp.mpf("0.8"))
    assert abs(mono - tpgeom.xi(a, mp.mpf("0.8"))) < mp.mpf("1e-28")
    osc = xi_quad_ref(a, mp.mpf("0.2"))
    assert abs(osc - tpgeom.xi(a, mp.mpf("0.2"), side=1)) < mp.mpf("1e-28")
    assert mp.im(osc) < 0


def test_oracle_determinism(p05):
    x = mp.mpf("0.33")
    assert ferrers_P_ref(p05, x) == ferrers_P_ref(p05, x)
    assert ferrers_Q_ref(p05, x) == ferrers_Q_ref(p05, x)
