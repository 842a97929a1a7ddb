"""Ferrers functions of large degree from parabolic cylinder expansions.

The two slowly varying coefficient functions that multiply U and U' are
produced along three routes that cross-check each other: direct evaluation
of the truncated expansion away from the turning points, Taylor series
about a turning point or the origin with coefficients extracted by ring
sampling, and Cauchy-integral resampling on a circle.  On top of them sit
the point evaluators for P, Q and their derivatives, plus the envelope
and relative-error diagnostics used by the accuracy experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .coeffs import _d_value, gen_leg_E, gen_pcf_e, gen_pcf_etilde
from .numerics import (
    DomainError,
    ExtComplex,
    ExtReal,
    GeometryError,
    InconsistencyError,
    RangeError,
    SearchError,
    frac_to_mp,
)
from .pcf import CANCEL_DIGITS_PER_X2, pcf_eval
from .tpgeom import Params, TpPoint, X_of, w_of, zeta

# Largest number of retained expansion terms; the block tables are
# generated up to the matching top index 2*MAX_TERMS - 1.
MAX_TERMS = 4

# Points closer to [-a, a] than this must use the Taylor or contour route;
# the raw expansion blocks grow like (distance)^(-3(2n-1)/2) inside it.
EXCLUSION_RADIUS = mp.mpf("0.04")

# Switchover distance from +-a below which evaluation routes through the
# turning-point Taylor series.
TAYLOR_SWITCH = mp.mpf("0.08")

# Ring sampling layout for Taylor coefficient extraction.
RING_POINTS = 32
RING_RADIUS = mp.mpf("0.04")
RING_EXTRA_DIGITS = 45
RING_KEEP = 28

# Singular-channel content must stay below 10^(NOISE_EXPONENT - p) times
# the sample scale, else a branch bug is flagged.
NOISE_EXPONENT = 12

# Evaluation stops this far from x = +-1; the zeta inversion degrades as
# zeta -> infinity even though the expansion itself survives the limit.
ENDPOINT_GUARD = mp.mpf("1e-3")

_CONTOUR_MIN_MARGIN = mp.mpf("0.06")
_CONTOUR_MAX_RADIUS = mp.mpf("0.9")
_CONTOUR_CLEARANCE = mp.mpf("0.05")


@dataclass(frozen=True)
class AbPair:
    """Values of the slowly varying coefficient pair at one point.

    Atilde and Btilde, when present, are the derivative companions that
    multiply U and U' in the derivative of P (chain-rule assembly, not the
    bare z-derivatives).
    """

    A: ExtComplex
    B: ExtComplex
    Atilde: ExtComplex | None = None
    Btilde: ExtComplex | None = None
    method: str = ""


@dataclass(frozen=True)
class EnvelopeValue:
    """Envelope magnitude M and the largest positive zero of Q (0 if none)."""

    M: ExtReal
    q_zero: ExtReal


class _D:
    """Value/derivative pair for product-rule-free composition."""

    __slots__ = ("v", "d")

    def __init__(self, v, d=0):
        self.v = v
        self.d = d

    def __add__(self, other):
        if isinstance(other, _D):
            return _D(self.v + other.v, self.d + other.d)
        return _D(self.v + other, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, _D):
            return _D(self.v - other.v, self.d - other.d)
        return _D(self.v - other, self.d)

    def __neg__(self):
        return _D(-self.v, -self.d)

    def __mul__(self, other):
        if isinstance(other, _D):
            return _D(self.v * other.v, self.v * other.d + self.d * other.v)
        return _D(self.v * other, self.d * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _D):
            return _D(self.v / other.v,
                      (self.d * other.v - self.v * other.d) / (other.v * other.v))
        return _D(self.v / other, self.d / other)

    def __pow__(self, k):
        out = _D(1, 0)
        for _ in range(k):
            out = out * self
        return out


_TABLES = None


def _tables():
    global _TABLES
    if _TABLES is None:
        top = 2 * MAX_TERMS - 1
        _TABLES = (gen_leg_E(top), gen_pcf_e(top), gen_pcf_etilde(top))
    return _TABLES


def _poly_val(poly, var, t):
    return poly.eval(var, t)


def _poly_dvar(poly, var, t):
    """d/dvar of a coefficient polynomial at numeric (var, t)."""
    acc = mp.mpc(0)
    for k in range(poly.degree, 0, -1):
        row = poly.table[k]
        cj = mp.mpc(0)
        tp = mp.mpf(1)
        for c in row:
            if c:
                cj += frac_to_mp(c) * tp
            tp *= t
        acc = acc * var + k * cj
    return acc


def _dvalues(params):
    a2 = params.alpha * params.alpha
    return {k: _d_value(k, a2) for k in (1, 3, 5, 7)}


def _prims(params, z, zeta_val, X, w, want_deriv):
    """Combined blocks, prefactor and w as duals at one point.

    The inputs fix the branch: X and w must be a consistent pair (both
    principal, or both continued along the same path).  Derivative slots
    are filled only when requested; otherwise they hold zeros.
    """
    leg, pe, pt = _tables()
    a2 = params.a * params.a
    al2 = params.alpha * params.alpha
    beta = 1 / (X * (z + X))
    betahat = 1 / (w * (zeta_val + w))
    if want_deriv:
        dzeta = X / ((1 - z * z) * w)
        dbeta = -beta * beta * (X + z * z / X + 2 * z)
        dbetahat = -betahat * betahat * (w + zeta_val * zeta_val / w + 2 * zeta_val) * dzeta
    else:
        dzeta = dbeta = dbetahat = mp.mpf(0)
    top = 2 * MAX_TERMS - 1
    et = {}
    ep = {}
    for s in range(1, top + 1):
        sgn = (-1) ** s
        lv = _poly_val(leg[s - 1], beta, a2)
        pv = _poly_val(pe[s - 1], betahat, al2)
        tv = _poly_val(pt[s - 1], betahat, al2)
        if want_deriv:
            ld = _poly_dvar(leg[s - 1], beta, a2) * dbeta
            pd = _poly_dvar(pe[s - 1], betahat, al2) * dbetahat
            td = _poly_dvar(pt[s - 1], betahat, al2) * dbetahat
        else:
            ld = pd = td = mp.mpf(0)
        ep[s] = _D(lv + sgn * pv, ld + sgn * pd)
        et[s] = _D(lv + sgn * tv, ld + sgn * td)
    r14v = mp.sqrt(w / X)
    r14d = r14v * (zeta_val * dzeta / (w * w) - z / (X * X)) / 2 if want_deriv else mp.mpf(0)
    return {
        "et": et,
        "ep": ep,
        "R14": _D(r14v, r14d),
        "w": _D(w, zeta_val * dzeta / w if want_deriv else mp.mpf(0)),
        "beta": beta,
        "betahat": betahat,
    }


def _a_terms(params, prims):
    """Per-power coefficients multiplying u^(-2s) inside A, s = 1..3."""
    d = _dvalues(params)
    et = prims["et"]
    p2, p4, p6 = et[2], et[4], et[6]
    o1 = et[1] + d[1]
    o3 = et[3] + d[3]
    o5 = et[5] + d[5]
    a2 = p2 + o1 ** 2 / 2
    a4 = p4 + p2 ** 2 / 2 + p2 * o1 ** 2 / 2 + o1 * o3 + o1 ** 4 / 24
    a6 = (p6 + p2 * p4 + p2 ** 3 / 6
          + (p4 + p2 ** 2 / 2) * (o1 ** 2 / 2)
          + p2 * (o1 * o3 + o1 ** 4 / 24)
          + o3 ** 2 / 2 + o1 * o5 + o1 ** 3 * o3 / 6 + o1 ** 6 / 720)
    return [a2, a4, a6]


def _b_terms(params, prims):
    """Odd per-power sums whose quotients by w give the B coefficients."""
    d = _dvalues(params)
    ep = prims["ep"]
    r2, r4, r6 = ep[2], ep[4], ep[6]
    q1 = ep[1] + d[1]
    q3 = ep[3] + d[3]
    q5 = ep[5] + d[5]
    q7 = ep[7] + d[7]
    b1 = q1
    b3 = q3 + q1 ** 3 / 6 + r2 * q1
    b5 = (q5 + q1 ** 2 * q3 / 2 + q1 ** 5 / 120
          + r2 * (q3 + q1 ** 3 / 6)
          + (r4 + r2 ** 2 / 2) * q1)
    b7 = (q7 + q1 ** 2 * q5 / 2 + q1 * q3 ** 2 / 2 + q1 ** 4 * q3 / 24 + q1 ** 7 / 5040
          + r2 * (q5 + q1 ** 2 * q3 / 2 + q1 ** 5 / 120)
          + (r4 + r2 ** 2 / 2) * (q3 + q1 ** 3 / 6)
          + (r6 + r2 * r4 + r2 ** 3 / 6) * q1)
    return [b1, b3, b5, b7]


def _lambda_prefactor(params):
    u = params.u
    return (mp.power(mp.pi, mp.mpf(1) / 4) / (mp.power(u, mp.mpf(1) / 4) * mp.sqrt(2))
            * mp.exp(-mp.loggamma(u + params.mu + mp.mpf(1) / 2) / 2))


def _check_n(n):
    if not isinstance(n, int) or not 1 <= n <= MAX_TERMS:
        raise RangeError(f"term count n must be an integer in 1..{MAX_TERMS}")


def _cut_distance(params, z):
    return min(abs(z - params.a), abs(z + params.a))


def _point_prims(params, z, want_deriv, hint=None):
    """Principal-branch primitives with a magnitude-driven precision boost.

    The combined blocks cancel contributions that grow like beta^(3s), so a
    probe pass measures |beta| and the real pass reruns everything with the
    matching number of extra digits.
    """
    tp = zeta(params, z, hint=hint)
    w = w_of(params, tp.zeta)
    mag = max(abs(tp.beta), abs(tp.betahat), mp.mpf(1))
    extra = 0
    if mag > 1:
        extra = int(mp.ceil(3 * (2 * MAX_TERMS - 1) * mp.log10(mag))) + 8
        with mp.extradps(extra):
            tp = zeta(params, z, hint=hint)
            w = w_of(params, tp.zeta)
    with mp.extradps(extra):
        prims = _prims(params, tp.z, tp.zeta, tp.X, w, want_deriv)
    return prims, tp, w


def _compose(params, prims, n):
    """Assemble the full coefficient duals (prefactor included) at one point."""
    u = params.u
    lam = _lambda_prefactor(params)
    a_terms = _a_terms(params, prims)
    b_terms = _b_terms(params, prims)
    fa = _D(mp.mpf(1), mp.mpf(0))
    for s in range(1, n):
        fa = fa + a_terms[s - 1] / mp.power(u, 2 * s)
    fb = _D(mp.mpf(0), mp.mpf(0))
    for s in range(n):
        fb = fb + (b_terms[s] / prims["w"]) / mp.power(u, 2 * s)
    r14 = prims["R14"]
    return r14 * fa * lam, r14 * fb * (lam / (u * u))


def _cross_factors(params, z, zeta_val, X, w):
    """The exact multipliers u^2 sqrt((zeta^2-alpha^2) f) = u^2 w X/(1-z^2)
    and sqrt(f/(zeta^2-alpha^2)) = X/(w (1-z^2)) used by the derivative
    companions; at z = +-a the removable limit is substituted."""
    u = params.u
    if z == params.a or z == -params.a:
        a = params.a
        varpi = mp.cbrt(a / ((1 - a * a) ** 2 * params.alpha))
        ratio = mp.sqrt(a / (params.alpha * varpi))
        return mp.mpf(0), ratio / (1 - a * a)
    return u * u * w * X / (1 - z * z), X / (w * (1 - z * z))


def ab_expansion(params: Params, z, n: int) -> AbPair:
    """Coefficient pair from the truncated expansion at a point away from
    the turning points.

    Parameters
    ----------
    params : Params
        Degree/order bundle.
    z : complex or real
        Point in the plane cut along (-inf, -1] and [1, inf); its distance
        to both turning points must be at least EXCLUSION_RADIUS.
    n : int
        Number of retained terms, 1..4.

    Returns
    -------
    AbPair
        A, B with derivative companions filled, method tag "expansion".
        Values carry the tiny imaginary residue of the complex branch
        arithmetic when z is real; callers take real parts.
    """
    _check_n(n)
    z = mp.mpc(z) if mp.im(z) != 0 else mp.mpf(mp.re(z))
    if mp.im(z) == 0 and abs(z) >= 1:
        raise DomainError("real arguments must lie inside (-1, 1)")
    if _cut_distance(params, z) < EXCLUSION_RADIUS:
        raise DomainError("point is inside the turning-point exclusion region; "
                          "use the Taylor or contour route")
    return _ab_expansion_point(params, z, n, want_deriv=True)


def _ab_expansion_point(params, z, n, want_deriv, hint=None):
    prims, tp, w = _point_prims(params, z, want_deriv, hint=hint)
    av, bv = _compose(params, prims, n)
    if not want_deriv:
        return AbPair(A=av.v, B=bv.v, method="expansion")
    f1, f2 = _cross_factors(params, tp.z, tp.zeta, tp.X, w)
    return AbPair(A=av.v, B=bv.v,
                  Atilde=av.d + f1 * bv.v,
                  Btilde=bv.d + f2 * av.v,
                  method="expansion")


_RING_CACHE: dict = {}


def _ring_samples_tp(params):
    """Sample the separated coefficient functions on a double loop around +a.

    X and w are continued by sign tracking along the loop, so the samples
    traverse both branches; single-valuedness of the combined functions then
    shows up as vanishing half-integer channels in the DFT, which is the
    branch-consistency check.
    """
    m2 = 2 * RING_POINTS
    rho = RING_RADIUS
    samples = {name: [] for name in _RING_NAMES}
    xprev = wprev = None
    hint = None
    first = None
    for j in range(m2 + 1):
        theta = 4 * mp.pi * (j % m2 + mp.mpf(1) / 2) / m2
        zj = params.a + rho * mp.exp(mp.mpc(0, 1) * theta)
        tp = zeta(params, zj, hint=hint)
        hint = tp.zeta
        xc = X_of(params, zj)
        wc = w_of(params, tp.zeta)
        if xprev is not None:
            if abs(xc - xprev) > abs(xc + xprev):
                xc = -xc
            if abs(wc - wprev) > abs(wc + wprev):
                wc = -wc
        if j == m2:
            if abs(xc - first[0]) > abs(xc) * mp.mpf(10) ** (-5) \
                    or abs(wc - first[1]) > abs(wc) * mp.mpf(10) ** (-5):
                raise InconsistencyError("ring continuation did not close up "
                                         "after two revolutions")
            break
        if j == 0:
            first = (xc, wc)
        xprev, wprev = xc, wc
        mag = max(abs(1 / (xc * (zj + xc))), abs(1 / (wc * (tp.zeta + wc))), mp.mpf(1))
        extra = int(mp.ceil(3 * (2 * MAX_TERMS - 1) * mp.log10(mag))) + 8 if mag > 1 else 0
        with mp.extradps(extra):
            prims = _prims(params, zj, tp.zeta, xc, wc, want_deriv=False)
            aterms = _a_terms(params, prims)
            bterms = _b_terms(params, prims)
            row = [prims["R14"].v]
            row.extend(t.v for t in aterms)
            row.extend((b / prims["w"]).v for b in bterms)
        for name, val in zip(_RING_NAMES, row):
            samples[name].append(val)
    return samples


_RING_NAMES = ("R14", "A2", "A4", "A6", "B0", "B2", "B4", "B6")


def _ring_samples_origin(params):
    """Sample the coefficient functions on one loop around the origin.

    The ring crosses the branch cut of the principal square roots on the
    real segment, so X and w are continued by the same sign tracking as the
    turning-point loop; neither branch point is enclosed, hence one
    revolution closes up.
    """
    if params.a <= RING_RADIUS + mp.mpf("0.01"):
        raise DomainError("origin Taylor patch needs the turning points to "
                          "clear the sampling ring")
    m = 2 * RING_POINTS
    rho = RING_RADIUS
    samples = {name: [] for name in _RING_NAMES}
    xprev = wprev = None
    hint = None
    first = None
    for j in range(m + 1):
        theta = 2 * mp.pi * (j % m + mp.mpf(1) / 2) / m
        zj = rho * mp.exp(mp.mpc(0, 1) * theta)
        tp = zeta(params, zj, hint=hint)
        hint = tp.zeta
        xc = X_of(params, zj)
        wc = w_of(params, tp.zeta)
        if xprev is not None:
            if abs(xc - xprev) > abs(xc + xprev):
                xc = -xc
            if abs(wc - wprev) > abs(wc + wprev):
                wc = -wc
        if j == m:
            if abs(xc - first[0]) > abs(xc) * mp.mpf(10) ** (-5) \
                    or abs(wc - first[1]) > abs(wc) * mp.mpf(10) ** (-5):
                raise InconsistencyError("origin ring continuation did not "
                                         "close up after one revolution")
            break
        if j == 0:
            first = (xc, wc)
        xprev, wprev = xc, wc
        mag = max(abs(1 / (xc * (zj + xc))), abs(1 / (wc * (tp.zeta + wc))), mp.mpf(1))
        extra = int(mp.ceil(3 * (2 * MAX_TERMS - 1) * mp.log10(mag))) + 8 if mag > 1 else 0
        with mp.extradps(extra):
            prims = _prims(params, zj, tp.zeta, xc, wc, want_deriv=False)
            aterms = _a_terms(params, prims)
            bterms = _b_terms(params, prims)
            row = [prims["R14"].v]
            row.extend(t.v for t in aterms)
            row.extend((b / prims["w"]).v for b in bterms)
        for name, val in zip(_RING_NAMES, row):
            samples[name].append(val)
    return samples


def ring_taylor_coefficients(params: Params, center: str = "tp") -> dict:
    """Taylor coefficients of the separated coefficient functions.

    Parameters
    ----------
    params : Params
        Only the geometry (a, alpha) matters; results are u-independent.
    center : str
        "tp" for the series about z = a, "origin" for the series about 0.

    Returns
    -------
    dict
        Lists of real coefficients for R14, A2, A4, A6, B0, B2, B4, B6 in
        ascending powers of (z - center), plus "radius" and "center".

    Raises
    ------
    InconsistencyError
        When a singular channel (half-integer powers about a, wrong-parity
        or imaginary content) rises above the noise threshold, indicating a
        branch-tracking defect.
    """
    if center not in ("tp", "origin"):
        raise DomainError("center must be 'tp' or 'origin'")
    p_active = mp.mp.dps
    key = (str(params.a), center, p_active)
    if key in _RING_CACHE:
        return _RING_CACHE[key]
    ring_dps = p_active + RING_EXTRA_DIGITS
    with mp.workdps(ring_dps):
        if center == "tp":
            samples = _ring_samples_tp(params)
        else:
            samples = _ring_samples_origin(params)
        m2 = 2 * RING_POINTS
        tol_base = mp.mpf(10) ** (NOISE_EXPONENT - p_active)
        out = {"radius": RING_RADIUS,
               "center": params.a if center == "tp" else mp.mpf(0)}
        kern = [mp.exp(mp.mpc(0, -1) * 2 * mp.pi * j / m2) for j in range(m2)]
        for name in _RING_NAMES:
            vals = samples[name]
            scale = max(mp.mpf(1), max(abs(v) for v in vals))
            tol = tol_base * scale
            coeffs = []
            for k in range(m2):
                acc = mp.mpc(0)
                for j, v in enumerate(vals):
                    acc += v * kern[(k * j) % m2]
                # Nodes sit at half-offset angles; undo that phase per bin.
                acc = acc / m2 * mp.exp(mp.mpc(0, -1) * k * mp.pi / m2)
                coeffs.append(acc)
            taylor = []
            if center == "tp":
                # Bin k holds the coefficient of (z-a)^(k/2); odd k is the
                # half-integer channel and must be pure noise.
                for k in range(m2):
                    if k % 2 == 1:
                        if abs(coeffs[k]) > tol:
                            raise InconsistencyError(
                                f"half-integer channel of {name} at level "
                                f"{mp.nstr(abs(coeffs[k]), 5)} exceeds the noise threshold")
                    elif k // 2 < RING_KEEP:
                        taylor.append(coeffs[k] / mp.power(RING_RADIUS, k // 2))
            else:
                odd_fn = name.startswith("B")
                for k in range(m2):
                    if k < RING_KEEP:
                        c = coeffs[k] / mp.power(RING_RADIUS, k)
                        if (k % 2 == 0) == odd_fn:
                            if abs(coeffs[k]) > tol:
                                raise InconsistencyError(
                                    f"wrong-parity channel of {name} exceeds "
                                    "the noise threshold")
                            taylor.append(mp.mpf(0))
                        else:
                            taylor.append(c)
            cleaned = []
            for deg, c in enumerate(taylor):
                if abs(mp.im(c)) > tol / mp.power(RING_RADIUS, deg):
                    raise InconsistencyError(
                        f"imaginary content in the {name} Taylor coefficients")
                cleaned.append(mp.re(c))
            out[name] = cleaned
        _RING_CACHE[key] = out
    return out


def _series_eval(coeffs, t):
    """Horner value and t-derivative of a Taylor polynomial."""
    val = mp.mpf(0)
    der = mp.mpf(0)
    for m in range(len(coeffs) - 1, 0, -1):
        val = (val + coeffs[m]) * t
        der = der * t + m * coeffs[m]
    return val + coeffs[0], der


def ab_taylor(params: Params, z, n: int) -> AbPair:
    """Coefficient pair from ring-extracted Taylor series near +-a or 0.

    The center is the nearest of a, -a, 0 within TAYLOR_SWITCH of z
    (DomainError otherwise).  Values at the exact turning point are the
    series constant terms, making this the route of choice where the raw
    expansion blocks blow up.
    """
    _check_n(n)
    z = mp.mpc(z) if mp.im(z) != 0 else mp.mpf(mp.re(z))
    a = params.a
    dists = [(abs(z - a), "tp", 1), (abs(z + a), "tp", -1), (abs(z), "origin", 1)]
    dists.sort(key=lambda r: r[0])
    dist, center, sgn = dists[0]
    if dist > TAYLOR_SWITCH:
        raise DomainError("point is outside every Taylor patch")
    if center == "origin" and params.a <= RING_RADIUS + mp.mpf("0.01"):
        dist, center, sgn = dists[1]
        if dist > TAYLOR_SWITCH:
            raise DomainError("point is outside every Taylor patch")
    data = ring_taylor_coefficients(params, center)
    zz = sgn * z
    t = zz - data["center"]
    series = {}
    for name in _RING_NAMES:
        v, dv = _series_eval(data[name], t)
        series[name] = _D(v, dv)
    u = params.u
    lam = _lambda_prefactor(params)
    fa = _D(mp.mpf(1), mp.mpf(0))
    for s, name in zip((1, 2, 3), ("A2", "A4", "A6")):
        if s < n:
            fa = fa + series[name] / mp.power(u, 2 * s)
    fb = _D(mp.mpf(0), mp.mpf(0))
    for s, name in zip((0, 1, 2, 3), ("B0", "B2", "B4", "B6")):
        if s < n:
            fb = fb + series[name] / mp.power(u, 2 * s)
    av = series["R14"] * fa * lam
    bv = series["R14"] * fb * (lam / (u * u))
    if sgn == -1:
        av = _D(av.v, -av.d)
        bv = _D(-bv.v, bv.d)
    if z == a or z == -a:
        f1, f2 = _cross_factors(params, z, None, None, None)
    else:
        tp = zeta(params, z)
        wv = w_of(params, tp.zeta)
        f1, f2 = _cross_factors(params, tp.z, tp.zeta, tp.X, wv)
    return AbPair(A=av.v, B=bv.v,
                  Atilde=av.d + f1 * bv.v,
                  Btilde=bv.d + f2 * av.v,
                  method="taylor")


def ab_contour(params: Params, z, n: int, radius=None, points: int = None) -> AbPair:
    """Coefficient pair by Cauchy resampling on a circle around the cut.

    The expansion is evaluated on a circle of the given radius (default
    chosen from a and |z|) that encloses [-a, a] and z while staying inside
    the region of validity; the values and first derivatives at z follow
    from the trapezoidal Cauchy sums, which converge geometrically.
    """
    _check_n(n)
    z = mp.mpc(z) if mp.im(z) != 0 else mp.mpf(mp.re(z))
    a = params.a
    if radius is None:
        radius = min(_CONTOUR_MAX_RADIUS,
                     max(a + mp.mpf("0.2"), abs(z) + mp.mpf("0.08")))
    radius = mp.mpf(radius)
    if radius < a + _CONTOUR_MIN_MARGIN or radius > _CONTOUR_MAX_RADIUS:
        raise GeometryError("contour radius must lie in [a + 0.06, 0.9]")
    if abs(z) > radius - _CONTOUR_CLEARANCE:
        raise GeometryError("evaluation point is too close to the contour")
    p = mp.mp.dps
    if points is None:
        inner = mp.log(radius / abs(z)) if abs(z) > 0 else mp.inf
        outer = mp.log(mp.mpf("0.98") / radius)
        points = max(64, int(mp.ceil((p + 12) * mp.log(10) / min(inner, outer))))
    m = int(points)
    with mp.extradps(10):
        s_a = mp.mpc(0)
        s_b = mp.mpc(0)
        s_da = mp.mpc(0)
        s_db = mp.mpc(0)
        hint = None
        zeta_first = None
        for k in range(m):
            tk = radius * mp.exp(2 * mp.pi * mp.mpc(0, 1) * (k + mp.mpf(1) / 2) / m)
            prims, tp, w = _point_prims(params, tk, want_deriv=False, hint=hint)
            hint = tp.zeta
            if k == 0:
                zeta_first = tp.zeta
            av, bv = _compose(params, prims, n)
            cau = tk / (tk - z)
            cau2 = tk / ((tk - z) * (tk - z))
            s_a += av.v * cau
            s_b += bv.v * cau
            s_da += av.v * cau2
            s_db += bv.v * cau2
        t0 = radius * mp.exp(2 * mp.pi * mp.mpc(0, 1) * mp.mpf(1) / (2 * m))
        wrap = zeta(params, t0, hint=hint).zeta
        if abs(wrap - zeta_first) > abs(zeta_first) * mp.mpf(10) ** (-(p - 6)):
            raise InconsistencyError("contour continuation of zeta did not "
                                     "return to its start")
        a_val = s_a / m
        b_val = s_b / m
        da_val = s_da / m
        db_val = s_db / m
        tp_z = zeta(params, z)
        w_z = w_of(params, tp_z.zeta)
        f1, f2 = _cross_factors(params, tp_z.z, tp_z.zeta, tp_z.X, w_z)
    return AbPair(A=a_val, B=b_val,
                  Atilde=da_val + f1 * b_val,
                  Btilde=db_val + f2 * a_val,
                  method="contour")


def _ab_routed(params, x, n, method):
    if method == "taylor":
        return ab_taylor(params, x, n)
    if method == "contour":
        return ab_contour(params, x, n)
    if method == "expansion":
        return _ab_expansion_checked(params, x, n)
    if min(abs(x - params.a), abs(x + params.a)) < TAYLOR_SWITCH:
        return ab_taylor(params, x, n)
    return _ab_expansion_checked(params, x, n)


def _ab_expansion_checked(params, x, n):
    if _cut_distance(params, x) < EXCLUSION_RADIUS:
        raise DomainError("expansion route is excluded this close to a "
                          "turning point")
    return _ab_expansion_point(params, x, n, want_deriv=True)


def _eval_setup(params, x, n):
    _check_n(n)
    x = mp.mpf(x)
    if abs(x) > 1 - ENDPOINT_GUARD:
        raise DomainError("evaluation is supported for |x| <= 1 - 10^-3")
    return x


def _assembled(params, x, n, method, sign=1):
    """Common core: coefficient pair at x and cylinder values at the mapped
    argument (negated for the parity route when sign = -1).

    The whole assembly runs with enough extra digits to cover the known
    cancellation inside the recessive cylinder series, which grows
    quadratically with the mapped argument.
    """
    p0 = mp.mp.dps
    u = params.u
    with mp.extradps(10):
        xu_est = mp.sqrt(2 * u) * zeta(params, x).zeta.real
    bweb = params.mu - params.nu - mp.mpf(1) / 2
    extra = int(CANCEL_DIGITS_PER_X2 * xu_est * xu_est) + 18
    with mp.workdps(p0 + extra):
        pair = _ab_routed(params, x, n, method)
        s2u = mp.sqrt(2 * u)
        zv = zeta(params, x).zeta.real
        pv = pcf_eval(bweb, sign * s2u * zv)
    return pair, pv, s2u


def eval_P(params: Params, x, n: int = MAX_TERMS, method: str = None) -> ExtReal:
    """Ferrers function of the first kind, order -mu, via the expansion.

    Parameters
    ----------
    params : Params
        Degree/order bundle with u = nu + 1/2, mu = u sqrt(1 - a^2).
    x : real
        Argument with |x| <= 1 - 10^-3.
    n : int
        Retained terms (1..4).
    method : str, optional
        Force "expansion", "taylor" or "contour"; default routes by the
        distance-to-turning-point rule.

    Returns
    -------
    mpf
        P to roughly working precision for the default experiment regime.
    """
    x = _eval_setup(params, x, n)
    pair, pv, s2u = _assembled(params, x, n, method)
    val = mp.sqrt(2 / mp.pi) * (pv.U * pair.A + s2u * pv.Uprime * pair.B)
    return mp.re(val)


def eval_P_neg(params: Params, x, n: int = MAX_TERMS, method: str = None) -> ExtReal:
    """P at -x assembled from the coefficient pair at +x (parity route)."""
    x = _eval_setup(params, x, n)
    pair, pv_neg, s2u = _assembled(params, x, n, method, sign=-1)
    val = mp.sqrt(2 / mp.pi) * (pv_neg.U * pair.A - s2u * pv_neg.Uprime * pair.B)
    return mp.re(val)


def _q_prefactor(params):
    t = params.nu - params.mu + 1
    if t <= 0 and abs(t - mp.nint(t)) < mp.mpf("1e-8"):
        raise RangeError("Gamma(nu - mu + 1) pole; Q is not defined here")
    return mp.sqrt(mp.pi / 2) * mp.gamma(t)


def eval_Q(params: Params, x, n: int = MAX_TERMS, method: str = None) -> ExtReal:
    """Ferrers function of the second kind, order -mu."""
    x = _eval_setup(params, x, n)
    pair, pv, s2u = _assembled(params, x, n, method)
    val = _q_prefactor(params) * (pv.V * pair.A + s2u * pv.Vprime * pair.B)
    return mp.re(val)


def eval_P_prime(params: Params, x, n: int = MAX_TERMS, method: str = None) -> ExtReal:
    """x-derivative of P via the derivative companion coefficients."""
    x = _eval_setup(params, x, n)
    pair, pv, s2u = _assembled(params, x, n, method)
    val = mp.sqrt(2 / mp.pi) * (pv.U * pair.Atilde + s2u * pv.Uprime * pair.Btilde)
    return mp.re(val)


def eval_Q_prime(params: Params, x, n: int = MAX_TERMS, method: str = None) -> ExtReal:
    """x-derivative of Q via the derivative companion coefficients."""
    x = _eval_setup(params, x, n)
    pair, pv, s2u = _assembled(params, x, n, method)
    val = _q_prefactor(params) * (pv.V * pair.Atilde + s2u * pv.Vprime * pair.Btilde)
    return mp.re(val)


_Q_ZERO_CACHE: dict = {}


def _q_zero(params):
    """Largest positive zero of Q, located on the reference path."""
    from . import oracle

    key = (str(params.nu), str(params.mu))
    hit = _Q_ZERO_CACHE.get(key)
    if hit is not None and hit[0] >= mp.mp.dps:
        return hit[1]
    step = mp.mpf("0.02")
    x_hi = mp.mpf("0.98")
    with mp.extradps(10):
        prev_x = x_hi
        prev_s = mp.sign(oracle.ferrers_Q_ref(params, x_hi))
        bracket = None
        x = x_hi - step
        while x > 0:
            s = mp.sign(oracle.ferrers_Q_ref(params, x))
            if s == 0:
                bracket = (x, x)
                break
            if s != prev_s:
                bracket = (x, prev_x)
                break
            prev_x, prev_s = x, s
            x -= step
        if bracket is None:
            q = mp.mpf(0)
        elif bracket[0] == bracket[1]:
            q = bracket[0]
        else:
            lo, hi = bracket
            flo = oracle.ferrers_Q_ref(params, lo)
            if flo == 0:
                q = lo
            else:
                for _ in range(int(mp.mp.dps * mp.mpf("3.4")) + 12):
                    mid = (lo + hi) / 2
                    fm = oracle.ferrers_Q_ref(params, mid)
                    if fm == 0:
                        lo = hi = mid
                        break
                    if mp.sign(fm) == mp.sign(flo):
                        lo, flo = mid, fm
                    else:
                        hi = mid
                q = (lo + hi) / 2
            if not 0 < q < 1:
                raise SearchError("Q zero bracketing produced an invalid root")
    _Q_ZERO_CACHE[key] = (mp.mp.dps, q)
    return q


def envelope(params: Params, x, n: int = MAX_TERMS) -> EnvelopeValue:
    """Reference-scale envelope for relative-error normalization.

    M is sqrt(P^2 + (2Q/pi)^2) on [0, q] with q the largest positive zero
    of Q, and |P| beyond it (or everywhere when Q has no positive zero,
    in which case q_zero = 0).
    """
    from . import oracle

    _check_n(n)
    x = mp.mpf(x)
    if x < 0 or x > 1 - ENDPOINT_GUARD:
        raise DomainError("envelope is defined on [0, 1 - 10^-3]")
    q = _q_zero(params)
    with mp.extradps(10):
        pref = oracle.ferrers_P_ref(params, x)
        if q > 0 and x <= q:
            qref = oracle.ferrers_Q_ref(params, x)
            m_val = mp.sqrt(pref * pref + (2 * qref / mp.pi) ** 2)
        else:
            m_val = abs(pref)
    return EnvelopeValue(M=m_val, q_zero=q)


def omega_error(params: Params, x, n: int = MAX_TERMS) -> ExtReal:
    """log10 of |asymptotic - reference| over the envelope at x."""
    from . import oracle

    x = mp.mpf(x)
    env = envelope(params, x, n)
    approx = eval_P(params, x, n)
    with mp.extradps(10):
        delta = approx - oracle.ferrers_P_ref(params, x)
    if delta == 0:
        return mp.mpf("-inf")
    return mp.log10(abs(delta) / env.M)
