"""Independent reference paths used to validate the asymptotic machinery.

Ferrers functions are summed from the Gauss hypergeometric series
(https://dlmf.nist.gov/14.3.E1), parabolic cylinder and Legendre equations
are integrated by a high-order Taylor method, and the slowly varying
coefficient pair is assembled exactly from those references.  Everything
here trades speed for independence: no result in this module flows through
the expansion code it is meant to check.
"""

from __future__ import annotations

import mpmath as mp

from .legendre import AbPair
from .numerics import (
    DomainError,
    ExtComplex,
    ExtReal,
    PrecisionLossError,
    RangeError,
    ToleranceError,
)
from .pcf import MAX_B, PcfValue, _seed_values
from .tpgeom import Params, params_from_nu_mu, sqrt_pair, zeta

# Oracles always run with at least this many digits beyond the caller.
ORACLE_GUARD_DIGITS = 10

# Hypergeometric summation cap; past this the term ratio is not decaying
# fast enough for the requested precision.
_SERIES_CAP = 40000

# The Taylor-method Weber integrator keeps roundoff contamination of the
# recessive solution below target by adding digits quadratically in x.
_WEBER_CONTAMINATION = mp.mpf("0.2172")
_WEBER_MAX_X = mp.mpf(40)
_WEBER_ORDER = 42

_LEGENDRE_ORDER = 48
_LEGENDRE_SEED_X = mp.mpf("0.999")

# Distance from nu - mu to the nearest nonnegative integer below which the
# two-sided Ferrers solve degenerates and limit handling takes over.
DEGENERATE_EPS = mp.mpf("1e-6")


def _hyp_sums(nu, mu, arg, prec):
    """Sum F(nu+1, -nu; mu+1; arg) and its arg-derivative at ``prec`` digits.

    Returns (F, dF, peak) where peak is the largest partial magnitude seen,
    used by callers to detect cancellation.  Raises PrecisionLossError when
    the term ratio has not pushed the terms below threshold by the cap.
    """
    with mp.workdps(prec):
        term = mp.mpf(1)
        total = mp.mpf(1)
        dtotal = mp.mpf(0)
        peak = mp.mpf(1)
        small = 0
        k = 0
        while small < 2:
            factor = (k - nu) * (nu + k + 1) * arg / ((k + 1) * (mu + k + 1))
            dterm = term * (k - nu) * (nu + k + 1) / ((k + 1) * (mu + k + 1))
            term = term * factor
            total += term
            dtotal += dterm * (k + 1)
            k += 1
            mag = abs(term)
            if mag > peak:
                peak = mag
            small = small + 1 if mag <= peak * mp.mpf(10) ** (-(prec + 8)) else 0
            if k > _SERIES_CAP:
                raise PrecisionLossError(
                    "hypergeometric terms are not decaying fast enough; "
                    "the argument is too close to the singular endpoint")
        return total, dtotal, peak


def _ferrers_P_pair(nu, mu, x, prec):
    """Ferrers P of degree nu and order -mu with its x-derivative.

    The series runs in the variable (1-x)/2 with the recessive prefactor
    ((1-x)/(1+x))^(mu/2) / Gamma(mu+1); cancellation along the alternating
    stretch of the sum is absorbed by retrying with the measured number of
    lost digits added.
    """
    extra = 10
    for _ in range(6):
        with mp.workdps(prec + extra):
            F, dF, peak = _hyp_sums(nu, mu, (1 - mp.mpf(x)) / 2, prec + extra)
            lost = 0 if abs(F) >= peak else int(mp.ceil(mp.log10(peak / abs(F)))) if F != 0 else extra + prec
            if lost <= extra - 5:
                pref = mp.rgamma(mu + 1) * mp.power((1 - x) / ((1 + x)), mu / 2)
                val = pref * F
                dval = pref * (-mu / ((1 - x) * (1 + x)) * F - dF / 2)
                return val, dval
        extra = lost + 15
    raise PrecisionLossError("hypergeometric cancellation exceeds the retry budget")


def ferrers_P_ref(params: Params, x) -> ExtReal:
    """Reference Ferrers function of the first kind, order -mu.

    Parameters
    ----------
    params : Params
        Degree/order bundle; only nu and mu are read.
    x : real
        Argument in (-1, 1).

    Returns
    -------
    mpf
        P computed from the hypergeometric series at a precision at least
        ORACLE_GUARD_DIGITS beyond the active one.  For integer nu the sum
        terminates and is exact at that precision.
    """
    x = mp.mpf(x)
    if not -1 < x < 1:
        raise DomainError("ferrers_P_ref requires x in (-1, 1)")
    return _ferrers_P_pair(params.nu, params.mu, x,
                           mp.mp.dps + ORACLE_GUARD_DIGITS)[0]


def ferrers_P_prime_ref(params: Params, x) -> ExtReal:
    """x-derivative companion of ferrers_P_ref, from the same series."""
    x = mp.mpf(x)
    if not -1 < x < 1:
        raise DomainError("ferrers_P_prime_ref requires x in (-1, 1)")
    return _ferrers_P_pair(params.nu, params.mu, x,
                           mp.mp.dps + ORACLE_GUARD_DIGITS)[1]


def _x0_values(nu, mu):
    """P, P', Q, Q' at x = 0 (https://dlmf.nist.gov/14.5.i with order -mu)."""
    rp = mp.sqrt(mp.pi)
    half = mp.mpf(1) / 2
    p0 = mp.power(2, -mu) * rp * mp.rgamma((nu + mu) / 2 + 1) * mp.rgamma(half - (nu - mu) / 2)
    pp0 = -mp.power(2, 1 - mu) * rp * mp.rgamma((nu + mu) / 2 + half) * mp.rgamma(-(nu - mu) / 2)
    q0 = -mp.power(2, -mu - 1) * rp * mp.sin((nu - mu) * mp.pi / 2) \
        * mp.gamma((nu - mu) / 2 + half) * mp.rgamma((nu + mu) / 2 + 1)
    qp0 = mp.power(2, -mu) * rp * mp.cos((nu - mu) * mp.pi / 2) \
        * mp.gamma((nu - mu) / 2 + 1) * mp.rgamma((nu + mu) / 2 + half)
    return p0, pp0, q0, qp0


def ferrers_Q_ref(params: Params, x) -> ExtReal:
    """Reference Ferrers function of the second kind, order -mu.

    Combines the two recessive hypergeometric solutions,
    Q(x) = A P(x) + B P(-x), with A and B fixed by the x = 0 values.  When
    nu - mu sits within DEGENERATE_EPS of an integer the two solutions are
    (nearly) proportional and the combination is ill-conditioned; the value
    is then obtained by integrating the Legendre equation from the exact
    x = 0 data instead.
    """
    x = mp.mpf(x)
    if not -1 < x < 1:
        raise DomainError("ferrers_Q_ref requires x in (-1, 1)")
    return _ferrers_Q_pair(params, x, mp.mp.dps + ORACLE_GUARD_DIGITS)[0]


def ferrers_Q_prime_ref(params: Params, x) -> ExtReal:
    """x-derivative companion of ferrers_Q_ref."""
    x = mp.mpf(x)
    if not -1 < x < 1:
        raise DomainError("ferrers_Q_prime_ref requires x in (-1, 1)")
    return _ferrers_Q_pair(params, x, mp.mp.dps + ORACLE_GUARD_DIGITS)[1]


def _ferrers_Q_pair(params: Params, x, prec):
    nu, mu = params.nu, params.mu
    m = nu - mu
    with mp.workdps(prec + 10):
        if abs(m - mp.nint(m)) < DEGENERATE_EPS:
            _, _, q0, qp0 = _x0_values(nu, mu)
            return _legendre_march(params, mp.mpf(0), q0, qp0, x, prec + 10)
        p0, pp0, q0, qp0 = _x0_values(nu, mu)
        ca = (q0 / p0 + qp0 / pp0) / 2
        cb = (q0 / p0 - qp0 / pp0) / 2
        vp, dp = _ferrers_P_pair(nu, mu, x, prec + 10)
        vm, dm = _ferrers_P_pair(nu, mu, -x, prec + 10)
        return ca * vp + cb * vm, ca * dp - cb * dm


def _legendre_march(params: Params, x0, y0, yp0, x1, prec):
    """Taylor-method integration of the Legendre equation between real points.

    Each step expands 1/(1-x^2) about the current point, builds the solution
    coefficients by Cauchy products, and advances by a step kept both inside
    a third of the distance to the nearest singular endpoint and small
    enough that the last retained terms are below the roundoff target.
    """
    nu, mu = params.nu, params.mu
    K = _LEGENDRE_ORDER
    with mp.workdps(prec):
        nn = nu * (nu + 1)
        mu2 = mu * mu
        t = mp.mpf(x0)
        y, yp = mp.mpf(y0), mp.mpf(yp0)
        target = mp.mpf(x1)
        while t != target:
            room = mp.mpf("0.3") * min(1 - t, 1 + t)
            rem = target - t
            h = mp.sign(rem) * min(abs(rem), room, mp.mpf("0.25"))
            for _ in range(12):
                r = [mp.mpf(1) / 2 * (1 / (1 - t) ** (k + 1) + (-1) ** k / (1 + t) ** (k + 1))
                     for k in range(K + 1)]
                s = [mp.fsum(r[j] * r[k - j] for j in range(k + 1)) for k in range(K + 1)]
                xr = [t * r[k] + (r[k - 1] if k else 0) for k in range(K + 1)]
                c = [y, yp] + [mp.mpf(0)] * K
                for k in range(K - 1):
                    acc = mp.mpf(0)
                    for j in range(k + 1):
                        acc += 2 * xr[j] * (k - j + 1) * c[k - j + 1] \
                            + (mu2 * s[j] - nn * r[j]) * c[k - j]
                    c[k + 2] = acc / ((k + 1) * (k + 2))
                scale = max(abs(y), abs(yp), mp.mpf(10) ** (-prec))
                tail = max(abs(c[K] * h ** K), abs(c[K - 1] * h ** (K - 1)))
                if tail <= scale * mp.mpf(10) ** (-(prec - 2)):
                    break
                h /= 2
            else:
                raise ToleranceError("legendre integration step size collapsed")
            ynew = mp.mpf(0)
            ypnew = mp.mpf(0)
            for k in range(K, 1, -1):
                ynew = (ynew + c[k]) * h
                ypnew = (ypnew + k * c[k]) * h
            y, yp = (ynew + c[1]) * h + c[0], ypnew + c[1]
            t = target if h == rem else t + h
        return y, yp


def legendre_ode_P_ref(params: Params, x) -> ExtReal:
    """Second, series-free Ferrers P oracle: integrate the Legendre equation.

    The recessive solution is anchored just inside the endpoint (x = 0.999,
    where the hypergeometric seed needs only a handful of terms) and carried
    to x by the Taylor marcher, so agreement with ferrers_P_ref checks the
    globally summed series against locally transported data.
    """
    x = mp.mpf(x)
    if not -1 < x < 1:
        raise DomainError("legendre_ode_P_ref requires x in (-1, 1)")
    if abs(x) > _LEGENDRE_SEED_X:
        raise DomainError("integration oracle starts at |x| = 0.999; "
                          "use ferrers_P_ref beyond it")
    prec = mp.mp.dps + ORACLE_GUARD_DIGITS + 15
    y0, yp0 = _ferrers_P_pair(params.nu, params.mu, _LEGENDRE_SEED_X, prec)
    return _legendre_march(params, _LEGENDRE_SEED_X, y0, yp0, x, prec)[0]


def _weber_march(b, x1, prec):
    """March U and V together from their x = 0 seeds to x1 by Taylor steps."""
    K = _WEBER_ORDER
    with mp.workdps(prec):
        seeds = _seed_values(b)
        states = [(seeds[0], seeds[1]), (seeds[2], seeds[3])]
        out = []
        for y0, yp0 in states:
            t = mp.mpf(0)
            y, yp = mp.mpf(y0), mp.mpf(yp0)
            target = mp.mpf(x1)
            while t != target:
                rem = target - t
                h = mp.sign(rem) * min(abs(rem), mp.mpf("0.25"))
                for _ in range(12):
                    c = [y, yp] + [mp.mpf(0)] * K
                    q0 = t * t / 4 + b
                    for k in range(K - 1):
                        acc = q0 * c[k] + (t / 2) * (c[k - 1] if k >= 1 else 0) \
                            + (c[k - 2] / 4 if k >= 2 else 0)
                        c[k + 2] = acc / ((k + 1) * (k + 2))
                    scale = max(abs(y), abs(yp), mp.mpf(10) ** (-prec))
                    tail = max(abs(c[K] * h ** K), abs(c[K - 1] * h ** (K - 1)))
                    if tail <= scale * mp.mpf(10) ** (-(prec - 2)):
                        break
                    h /= 2
                else:
                    raise ToleranceError("weber integration step size collapsed")
                ynew = mp.mpf(0)
                ypnew = mp.mpf(0)
                for k in range(K, 1, -1):
                    ynew = (ynew + c[k]) * h
                    ypnew = (ypnew + k * c[k]) * h
                y, yp = (ynew + c[1]) * h + c[0], ypnew + c[1]
                t = target if h == rem else t + h
            out.extend([y, yp])
        return out


def pcf_ode_ref(b, x) -> PcfValue:
    """Reference parabolic cylinder values by direct integration of
    d^2y/dx^2 = (x^2/4 + b) y from the exact x = 0 data.

    The working precision grows quadratically with |x| so that roundoff
    seeded into the dominant solution cannot contaminate the recessive one
    beyond the guard digits.
    """
    b = mp.mpf(b)
    x = mp.mpf(x)
    if abs(b) > MAX_B:
        raise RangeError("pcf_ode_ref: |b| outside the supported envelope")
    if abs(x) > _WEBER_MAX_X:
        raise RangeError("pcf_ode_ref: |x| outside the integration envelope")
    prec = mp.mp.dps + ORACLE_GUARD_DIGITS + 15 + int(_WEBER_CONTAMINATION * x * x)
    uu, uup, vv, vvp = _weber_march(b, x, prec)
    return PcfValue(b=b, x=x, U=uu, Uprime=uup, V=vv, Vprime=vvp)


def ab_exact_ref(params: Params, x, side: int = 1) -> AbPair:
    """Exact slowly varying coefficients from the two-sided Ferrers solve.

    A and B follow from eliminating between the representations of P(x) and
    P(-x) in terms of U(b, -+sqrt(2u) zeta): with g = sqrt(2) Gamma(mu-nu) /
    (4 sqrt(u)),

        A =  g { P(x) dU(b, -sqrt(2u) zeta)/dzeta - P(-x) dU(b, sqrt(2u) zeta)/dzeta }
        B = -g { P(x)  U(b, -sqrt(2u) zeta)       - P(-x)  U(b, sqrt(2u) zeta) }

    with every ingredient taken from this module's reference paths.  side=-1
    evaluates the same formulas at -x and maps back through the parity of A
    (even) and B (odd), which callers use as a consistency check.  Near the
    poles of Gamma(mu-nu), where P(x) and P(-x) degenerate into one solution,
    the removable limit is taken by a symmetric perturbation of nu (see
    _ab_exact_limit).
    """
    x = mp.mpf(x)
    if side not in (1, -1):
        raise DomainError("side must be +1 or -1")
    if not -1 < x < 1:
        raise DomainError("ab_exact_ref requires x in (-1, 1)")
    t = params.mu - params.nu
    if t < mp.mpf("0.5") and abs(t - mp.nint(t)) < DEGENERATE_EPS and mp.nint(t) <= 0:
        return _ab_exact_limit(params, x, side)
    a_val, b_val = _ab_exact_core(params, x, side)
    return AbPair(A=a_val, B=b_val, method="exact")


def _ab_exact_core(params: Params, x, side):
    with mp.workdps(mp.mp.dps + ORACLE_GUARD_DIGITS):
        xa = side * x
        u = params.u
        bweb = params.mu - params.nu - mp.mpf(1) / 2
        zv = zeta(params, xa).zeta.real
        s2u = mp.sqrt(2 * u)
        xu = s2u * zv
        neg = pcf_ode_ref(bweb, -xu)
        pos = pcf_ode_ref(bweb, xu)
        pz = ferrers_P_ref(params, xa)
        pmz = ferrers_P_ref(params, -xa)
        g = mp.sqrt(2) * mp.gamma(params.mu - params.nu) / (4 * mp.sqrt(u))
        a_val = g * (pz * (-s2u) * neg.Uprime - pmz * s2u * pos.Uprime)
        b_val = -g * (pz * neg.U - pmz * pos.U)
        if side == -1:
            b_val = -b_val
        return a_val, b_val


def _ab_exact_limit(params: Params, x, side):
    """Removable-pole handling: average the solve at nu +- delta.

    The assembled A, B are analytic in nu, so the symmetric average has an
    O(delta^2) error; delta is tied to half the working precision and the
    inner evaluations carry enough extra digits to absorb the near-pole
    cancellation.
    """
    p = mp.mp.dps
    shift = max(8, p // 2)
    delta = mp.mpf(10) ** (-shift)
    with mp.workdps(p + shift + 15):
        vals = []
        for sgn in (1, -1):
            pert = params_from_nu_mu(params.nu + sgn * delta, params.mu)
            vals.append(_ab_exact_core(pert, x, side))
        a_val = (vals[0][0] + vals[1][0]) / 2
        b_val = (vals[0][1] + vals[1][1]) / 2
    return AbPair(A=a_val, B=b_val, method="exact")


def xi_quad_ref(a, x) -> ExtComplex:
    """Quadrature check value for the Liouville-Green variable.

    Integrates (f)^(1/2) directly: real from the turning point for
    a < x < 1, and i times the phase deficit for |x| <= a (upper side).
    """
    a = mp.mpf(a)
    x = mp.mpf(x)
    if not -1 < x < 1:
        raise DomainError("xi_quad_ref requires x in (-1, 1)")
    if x > a:
        val = mp.quad(lambda t: mp.sqrt((t - a) * (t + a)) / ((1 - t) * (1 + t)), [a, x])
        return mp.mpf(val)
    if abs(x) <= a:
        val = mp.quad(lambda t: mp.sqrt((a - t) * (a + t)) / ((1 - t) * (1 + t)), [x, a])
        return -mp.mpc(0, 1) * val
    raise DomainError("xi_quad_ref covers [-a, 1) only")


def ferrers_wronskian_ref(params: Params, x) -> ExtReal:
    """(1 - x^2) (P Q' - P' Q) from the reference pair; x-independent."""
    prec = mp.mp.dps + ORACLE_GUARD_DIGITS
    x = mp.mpf(x)
    with mp.workdps(prec):
        vp, dp = _ferrers_P_pair(params.nu, params.mu, x, prec)
        vq, dq = _ferrers_Q_pair(params, x, prec)
        return (1 - x * x) * (vp * dq - dp * vq)
