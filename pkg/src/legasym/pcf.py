"""Real-argument parabolic cylinder functions U, U', V, V'.

Two evaluation paths:

* ``pcf_eval``: even/odd Maclaurin series of Weber's equation
  y'' = (x^2/4 + b) y, seeded at x = 0 with gamma-function initial values.
  The recessive direction suffers cancellation of about 0.109 x^2 digits,
  which is estimated up front; the caller is expected to raise precision,
  since this routine never boosts silently.
* ``pcf_lg``: Liouville-Green expansions in the outer region zeta > alphahat,
  exact in the opposite regime (large argument), used as fallback when the
  series would lose too many digits at the active precision.

All four values are bundled as PcfValue; the pair (U, V) is normalized so
that the Wronskian U V' - U' V equals sqrt(2/pi).
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .coeffs import gen_pcf_e, gen_pcf_etilde
from .numerics import ExtReal, PrecisionLossError, RangeError

MAX_B = mp.mpf("1e4")
MAX_X = mp.mpf("1e3")
# The recessive solution scales like exp(-x^2/4) while the Maclaurin
# partial sums peak near exp(+x^2/4), so summation cancels about
# x^2/(2 ln 10) decimal digits.
CANCEL_DIGITS_PER_X2 = 0.21715
LG_MAX_TERMS = 16
LG_FALLBACK_ZETA = mp.mpf("1.5")


@dataclass(frozen=True)
class PcfValue:
    """Weber-equation solution data at one point."""

    b: ExtReal
    x: ExtReal
    U: ExtReal
    Uprime: ExtReal
    V: ExtReal
    Vprime: ExtReal


def _seed_values(b):
    """Series seeds U(b,0), U'(b,0), V(b,0), V'(b,0) in reciprocal-gamma
    form, finite for every real b."""
    q = mp.mpf(1) / 4
    sp = mp.sqrt(mp.pi)
    U0 = sp * mp.power(2, -b / 2 - q) * mp.rgamma(b / 2 + 3 * q)
    U0p = -sp * mp.power(2, -b / 2 + q) * mp.rgamma(b / 2 + q)
    V0 = mp.power(2, b / 2 + q) * mp.sin(mp.pi * (b / 2 + q)) * mp.rgamma(3 * q - b / 2)
    V0p = mp.power(2, b / 2 + 3 * q) * mp.cos(mp.pi * (b / 2 + q)) * mp.rgamma(q - b / 2)
    return U0, U0p, V0, V0p


def _weber_series(b, x, c0, c1):
    """Sum y, y' of the Maclaurin solution with y(0)=c0, y'(0)=c1, tracking
    the largest partial sum for the cancellation guard."""
    p = mp.mp.dps
    c = [c0, c1]
    y = c0 + c1 * x
    yp = mp.mpf(c1)
    peak = max(abs(c0), abs(y))
    xp = x
    k = 1
    thresh = mp.mpf(10) ** (-(p + 12))
    small_runs = 0
    while True:
        nxt = b * c[k - 1] + (c[k - 3] / 4 if k >= 3 else mp.mpf(0))
        ck1 = nxt / (k * (k + 1))
        c.append(ck1)
        xp_next = xp * x
        term = ck1 * xp_next
        y += term
        yp += (k + 1) * ck1 * xp
        xp = xp_next
        k += 1
        ay = abs(y)
        if ay > peak:
            peak = ay
        if abs(term) < thresh * max(ay, mp.mpf(1)):
            small_runs += 1
            if small_runs >= 2 and k > 8:
                break
        else:
            small_runs = 0
    return y, yp, peak


def _lg_core(u, alphahat2, zeta_val, n):
    """Log-space LG assembly valid for either sign of alphahat^2.

    Returns (U, U', V, V').  All logarithms have positive real arguments:
    the ln(alphahat) pieces of the exponent and the prefactor cancel
    identically, so nothing here depends on alphahat itself.
    """
    u = mp.mpf(u)
    alphahat2 = mp.mpf(alphahat2)
    zeta_val = mp.mpf(zeta_val)
    w = mp.sqrt(zeta_val * zeta_val - alphahat2)
    betahat = 1 / (w * (zeta_val + w))
    e_tab = gen_pcf_e(max(n - 1, 2))
    et_tab = gen_pcf_etilde(max(n - 1, 2))

    def sums(tables, alternate):
        acc = mp.mpf(0)
        up = mp.mpf(1)
        for s in range(1, n):
            up *= u
            val = tables[s - 1].eval(betahat, alphahat2)
            acc += ((-1) ** s if alternate else 1) * mp.re(val) / up
        return acc

    base = (u * alphahat2 / 4) * (mp.log(u / 2) - 1)
    core = u * zeta_val * w / 2 - u * alphahat2 * mp.log(zeta_val + w) / 2
    ln_flat = mp.log(2 * u * (zeta_val * zeta_val - alphahat2)) / 4
    ln_steep = mp.log(u * (zeta_val * zeta_val - alphahat2) / 8) / 4
    half_ln_2pi = mp.log(2 / mp.pi) / 2

    U = mp.exp(base - ln_flat - core + sums(e_tab, True))
    Up = -mp.exp(base + ln_steep - core + sums(et_tab, True))
    V = mp.exp(half_ln_2pi - base - ln_flat + core + sums(e_tab, False))
    Vp = mp.exp(half_ln_2pi - base + ln_steep + core + sums(et_tab, False))
    return U, Up, V, Vp


def pcf_lg(u, alpha, zeta_val, n: int) -> PcfValue:
    """U(-u*alpha^2/2, sqrt(2u)*zeta) and companions by the LG expansions.

    Parameters
    ----------
    u, alpha : ExtReal
        Expansion parameters; the Weber parameter is b = -u*alpha^2/2.
    zeta_val : ExtReal
        Comparison variable; must exceed alpha by a margin.
    n : int
        Truncation index; the exponent sums keep s = 1..n-1.

    Raises
    ------
    RangeError
        If zeta is too close to alpha (turning-point region) or n is not
        at least 2.
    """
    u = mp.mpf(u)
    alpha = mp.mpf(alpha)
    zeta_val = mp.mpf(zeta_val)
    if n < 2:
        raise RangeError("need n >= 2 for at least one correction term")
    if zeta_val < alpha + mp.mpf("0.1"):
        raise RangeError("zeta too close to the turning point alpha for the LG expansion")
    b = -u * alpha * alpha / 2
    x = mp.sqrt(2 * u) * zeta_val
    U, Up, V, Vp = _lg_core(u, alpha * alpha, zeta_val, n)
    return PcfValue(b=b, x=x, U=U, Uprime=Up, V=V, Vprime=Vp)


def _lg_fallback(b, x):
    """Recast (b, x) as LG data with zeta fixed and adaptive depth; returns
    a PcfValue or None when the geometry or convergence is unsuitable."""
    if x <= 0:
        return None
    zeta_val = LG_FALLBACK_ZETA
    u = x * x / (2 * zeta_val * zeta_val)
    if u < 3:
        return None
    alphahat2 = -2 * b / u
    if alphahat2 > 0 and mp.sqrt(alphahat2) > zeta_val - mp.mpf("0.4"):
        return None
    p = mp.mp.dps
    gen_pcf_e(LG_MAX_TERMS)
    gen_pcf_etilde(LG_MAX_TERMS)
    # probe term magnitudes to pick a truncation within the asymptotic regime
    w = mp.sqrt(zeta_val * zeta_val - alphahat2)
    betahat = 1 / (w * (zeta_val + w))
    e_tab = gen_pcf_e(LG_MAX_TERMS)
    best_n, best_term = 2, mp.inf
    up = mp.mpf(1)
    for s in range(1, LG_MAX_TERMS):
        up *= u
        term = abs(mp.re(e_tab[s - 1].eval(betahat, alphahat2))) / up
        if term < best_term:
            best_term, best_n = term, s + 1
        if term < mp.mpf(10) ** (-(p + 4)):
            break
    if best_term > mp.mpf(10) ** (-(p - 6)):
        return None
    U, Up_, V, Vp = _lg_core(u, alphahat2, zeta_val, best_n)
    return PcfValue(b=b, x=x, U=U, Uprime=Up_, V=V, Vprime=Vp)


def pcf_eval(b, x) -> PcfValue:
    """Evaluate U, U', V, V' at real (b, x).

    Runs at the active precision with no silent boosting: if the series
    would cancel away too many digits the LG fallback is tried, and failing
    that a PrecisionLossError asks the caller to raise the working
    precision before the call.

    Raises
    ------
    RangeError
        Outside the documented envelope |b| <= 1e4, |x| <= 1e3.
    PrecisionLossError
        When no path can deliver the accuracy implied by the active
        precision.
    """
    b = mp.mpf(b)
    x = mp.mpf(x)
    if abs(b) > MAX_B or abs(x) > MAX_X:
        raise RangeError("outside the documented (b, x) envelope")
    p = mp.mp.dps
    est_lost = CANCEL_DIGITS_PER_X2 * float(x) ** 2
    if est_lost > p - 8:
        lg = _lg_fallback(b, x)
        if lg is not None:
            return lg
        raise PrecisionLossError(
            f"series would cancel ~{est_lost:.0f} digits at dps={p}; "
            "raise the working precision")
    U0, U0p, V0, V0p = _seed_values(b)
    if x == 0:
        return PcfValue(b=b, x=x, U=U0, Uprime=U0p, V=V0, Vprime=V0p)
    U, Up_, peakU = _weber_series(b, x, U0, U0p)
    V, Vp, peakV = _weber_series(b, x, V0, V0p)
    guard = mp.mpf(10) ** (p - 8)
    for val, peak in ((U, peakU), (V, peakV)):
        if peak > max(abs(val), mp.mpf(10) ** (-p)) * guard:
            raise PrecisionLossError(
                "partial sums exceeded the result by more than 10^(p-8); "
                "raise the working precision")
    return PcfValue(b=b, x=x, U=U, Uprime=Up_, V=V, Vprime=Vp)


def pcf_connection_check(b, x) -> ExtReal:
    """Max residual over the connection identities at (b, x): both
    Wronskians, and the reflection parity when b = -n-1/2 for integer n."""
    b = mp.mpf(b)
    x = mp.mpf(x)
    plus = pcf_eval(b, x)
    minus = pcf_eval(b, -x)
    res = []
    wuv = plus.U * plus.Vprime - plus.Uprime * plus.V
    res.append(abs(wuv - mp.sqrt(2 / mp.pi)))
    wuu = -plus.U * minus.Uprime - plus.Uprime * minus.U
    res.append(abs(wuu - mp.sqrt(2 * mp.pi) * mp.rgamma(b + mp.mpf("0.5"))))
    n_guess = -b - mp.mpf("0.5")
    if abs(n_guess - mp.nint(n_guess)) < mp.mpf("1e-20") and n_guess >= 0:
        n = int(mp.nint(n_guess))
        res.append(abs(minus.U - (-1) ** n * plus.U))
    return max(res)
