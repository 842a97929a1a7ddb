"""Turning-point geometry for the Legendre problem.

Maps the argument z to the Liouville-Green variable xi, the comparison
variable zeta (implicitly defined by (1/2)zeta*w - (1/2)alpha^2*ln(zeta+w)
+ (1/2)alpha^2*ln(alpha) = xi with w = (zeta^2-alpha^2)^(1/2)), and the
rational variables beta, betahat that feed the coefficient polynomials.

Branch convention: principal branches with cuts on the negative real axis of
each square-root factor, which places the xi/zeta cut along (-inf, a].  On
the cut, values are the +i0 (upper side) limits unless a side flag says
otherwise.  The identities beta = 1/(X(z+X)) and betahat = 1/(w(zeta+w))
are used everywhere; they are exact and free of subtractive cancellation.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .numerics import (
    BranchAmbiguityError,
    DomainError,
    ExtComplex,
    ExtReal,
    RangeError,
    RootNotFoundError,
    newton_solve,
)

SWITCH_RADIUS = mp.mpf("0.08")
CONTROL_RADIUS_ORIGIN = mp.mpf("0.25")

_SERIES_CACHE: dict = {}


class Params:
    """Problem parameters tied by u = nu + 1/2, mu = u*sqrt(1-a^2),
    alpha^2 = 2(1 - sqrt(1-a^2)).

    Exactly one of a or mu is stored as the defining anchor; the remaining
    quantities are derived on access at the current working precision.  The
    constraints above therefore hold to working accuracy inside any
    raised-precision block, which matters: quantities built from a and
    quantities built from alpha only combine cleanly when the pair sits on
    the constraint curve to the full working accuracy, not just to the
    precision that happened to be active when the Params was created.
    """

    __slots__ = ("nu", "u", "_a", "_mu")

    def __init__(self, nu, u, a=None, mu=None):
        if (a is None) == (mu is None):
            raise DomainError("exactly one of a or mu anchors a Params")
        self.nu = nu
        self.u = u
        self._a = a
        self._mu = mu

    @property
    def a(self) -> ExtReal:
        if self._a is not None:
            return self._a
        sigma = self._mu / self.u
        return mp.sqrt((1 - sigma) * (1 + sigma))

    @property
    def mu(self) -> ExtReal:
        if self._mu is not None:
            return self._mu
        return self.u * mp.sqrt((1 - self._a) * (1 + self._a))

    @property
    def alpha(self) -> ExtReal:
        if self._a is not None:
            return alpha_from_a(self._a)
        return mp.sqrt(2 * (1 - self._mu / self.u))

    def __repr__(self):
        return (f"Params(nu={mp.nstr(self.nu, 17)}, mu={mp.nstr(self.mu, 17)}, "
                f"u={mp.nstr(self.u, 17)}, a={mp.nstr(self.a, 17)}, "
                f"alpha={mp.nstr(self.alpha, 17)})")


def alpha_from_a(a) -> ExtReal:
    """Return alpha = sqrt(2(1 - sqrt(1-a^2))) for 0 <= a < 1.

    Raises
    ------
    DomainError
        If a < 0 or a >= 1.
    """
    a = mp.mpf(a)
    if a < 0 or a >= 1:
        raise DomainError("turning point location a must satisfy 0 <= a < 1")
    return mp.sqrt(2 * (1 - mp.sqrt((1 - a) * (1 + a))))


def params_from_nu_a(nu, a) -> Params:
    nu = mp.mpf(nu)
    if nu < 0:
        raise DomainError("degree nu must be nonnegative")
    a = mp.mpf(a)
    alpha_from_a(a)
    return Params(nu=nu, u=nu + mp.mpf("0.5"), a=a)


def params_from_nu_mu(nu, mu) -> Params:
    nu = mp.mpf(nu)
    mu = mp.mpf(mu)
    if nu < 0 or mu < 0:
        raise DomainError("nu and mu must be nonnegative")
    u = nu + mp.mpf("0.5")
    if mu > u:
        raise DomainError("mu must not exceed nu + 1/2")
    if mu == 0:
        raise DomainError("mu = 0 puts the turning points at the endpoints")
    return Params(nu=nu, u=u, mu=mu)


@dataclass(frozen=True)
class TpPoint:
    """Geometry bundle at one point: z, xi, zeta, beta, betahat and
    X = (z^2-a^2)^(1/2) on the branch continued from the upper side."""

    z: ExtComplex
    xi: ExtComplex
    zeta: ExtComplex
    beta: ExtComplex
    betahat: ExtComplex
    X: ExtComplex


def _is_real(z) -> bool:
    return not isinstance(z, mp.mpc) or z.imag == 0


def sqrt_pair(c: ExtReal, z) -> ExtComplex:
    """(z^2 - c^2)^(1/2) as the principal product sqrt(z-c)*sqrt(z+c).

    For real z this realizes the +i0 limits: i*sqrt(c^2-z^2) on |z| < c,
    +sqrt(z^2-c^2) for z > c and -sqrt(z^2-c^2) for z < -c.
    """
    if _is_real(z):
        x = mp.mpf(z.real) if isinstance(z, mp.mpc) else mp.mpf(z)
        if abs(x) <= c:
            return mp.mpc(0, 1) * mp.sqrt((c - x) * (c + x))
        root = mp.sqrt((x - c) * (x + c))
        return root if x > 0 else -root
    return mp.sqrt(z - c) * mp.sqrt(z + c)


def X_of(params: Params, z) -> ExtComplex:
    return sqrt_pair(params.a, z)


def w_of(params: Params, zeta_val) -> ExtComplex:
    return sqrt_pair(params.alpha, zeta_val)


def _beta_from(z, X) -> ExtComplex:
    if X == 0:
        return mp.inf
    return 1 / (X * (z + X))


def _sqrt_f(a: ExtReal):
    """Integrand (f(a,t))^(1/2) = sqrt(t-a)sqrt(t+a)/(1-t^2), single valued
    off [-a,a] and the (+-1)-cuts (the two root factors flip together across
    (-inf,-a])."""

    def h(t):
        return sqrt_pair(a, t) / ((1 - t) * (1 + t))

    return h


def _osc_phase(a: ExtReal, alpha: ExtReal, x: ExtReal) -> ExtReal:
    """S(x) on (-a, a): arcsin(x/a) - sqrt(1-a^2) arctan(x sqrt((1-a^2)/(a^2-x^2)))."""
    sigma = 1 - alpha * alpha / 2
    return mp.asin(x / a) - sigma * mp.atan(x * mp.sqrt((1 - a * a) / ((a - x) * (a + x))))


def _xi_monotonic(a: ExtReal, alpha: ExtReal, x: ExtReal) -> ExtReal:
    """xi on (a, 1): sqrt(1-a^2) arctanh(sqrt((x^2-a^2)/(1-a^2))/x) - arccosh(x/a)."""
    sigma = 1 - alpha * alpha / 2
    return sigma * mp.atanh(mp.sqrt((x - a) * (x + a) / ((1 - a) * (1 + a))) / x) - mp.acosh(x / a)


def xi(a, z, side=None) -> ExtComplex:
    """The Liouville-Green variable xi(z), positive on (a, 1).

    Parameters
    ----------
    a : ExtReal
        Turning point location, 0 <= a < 1.
    z : ExtReal or ExtComplex
        Point in the plane cut along (-inf, -1] and [1, inf).
    side : optional, +1 or -1
        Required when z lies on the branch cut (-inf, a] with a > 0;
        selects the +-i0 limit.

    Raises
    ------
    DomainError
        If z is real with |z| >= 1.
    BranchAmbiguityError
        If z is on the cut and no side flag was given.
    """
    a = mp.mpf(a)
    if a < 0 or a >= 1:
        raise DomainError("require 0 <= a < 1")
    real = _is_real(z)
    if real:
        x = mp.mpf(z.real) if isinstance(z, mp.mpc) else mp.mpf(z)
        if abs(x) >= 1:
            raise DomainError("xi is defined on the plane cut along (-inf,-1] and [1,inf)")
        if a == 0:
            return -mp.log((1 - x) * (1 + x)) / 2
        alpha = alpha_from_a(a)
        if x > a:
            return _xi_monotonic(a, alpha, x)
        if x == a:
            return mp.mpf(0)
        if side not in (1, -1):
            raise BranchAmbiguityError("z lies on the cut (-inf, a]; pass side=+1 or side=-1")
        alpha2 = alpha * alpha
        if x > -a:
            return side * mp.mpc(0, 1) * (_osc_phase(a, alpha, x) - mp.pi * alpha2 / 4)
        if x == -a:
            return -side * mp.mpc(0, 1) * mp.pi * alpha2 / 2
        return _xi_monotonic(a, alpha, -x) - side * mp.mpc(0, 1) * mp.pi * alpha2 / 2
    z = mp.mpc(z)
    if a == 0:
        return -mp.log(1 - z * z) / 2
    anchor = (1 + a) / 2
    base = _xi_monotonic(a, alpha_from_a(a), anchor)
    # Integrate along a lifted polyline so the path keeps clear of the
    # branch points at +-a; a straight chord to a near-axis target can pass
    # arbitrarily close to them and degrade the quadrature.
    s = mp.sign(z.imag)
    lift = max(mp.mpf("0.35"), abs(z.imag))
    path = [anchor, mp.mpc(anchor, s * lift), mp.mpc(z.real, s * lift), z]
    return base + mp.quad(_sqrt_f(a), path)


def phi(params: Params, zeta_val, ln_winding: int = 0) -> ExtComplex:
    """Right side of the implicit zeta relation: (1/2)zeta*w
    - (1/2)alpha^2 ln(zeta+w) + (1/2)alpha^2 ln(alpha), with the logarithm
    shifted by 2*pi*i*ln_winding for continued contours."""
    alpha = params.alpha
    if alpha == 0:
        return zeta_val * zeta_val / 2
    w = w_of(params, zeta_val)
    lnzw = mp.log(zeta_val + w) + 2 * mp.pi * mp.mpc(0, 1) * ln_winding
    return zeta_val * w / 2 - alpha * alpha * (lnzw - mp.log(alpha)) / 2


def _solve_oscillatory(params: Params, x: ExtReal) -> ExtReal:
    a, alpha = params.a, params.alpha
    target = _osc_phase(a, alpha, x)
    alpha2 = alpha * alpha

    def f(c):
        return c * mp.sqrt(alpha2 - c * c) / 2 + alpha2 * mp.asin(c / alpha) / 2 - target

    def fp(c):
        return mp.sqrt(alpha2 - c * c)

    guess = alpha * x / a
    guess = min(max(guess, -alpha * (1 - mp.mpf("1e-12"))), alpha * (1 - mp.mpf("1e-12")))
    tol = mp.mpf(10) ** (-mp.mp.dps + 3)
    root = newton_solve(f, fp, guess, tol)
    return mp.mpf(root.real) if isinstance(root, mp.mpc) else root


def _solve_monotonic(params: Params, x: ExtReal) -> ExtReal:
    a, alpha = params.a, params.alpha
    xival = _xi_monotonic(a, alpha, x)
    alpha2 = alpha * alpha
    guess = alpha + mp.sqrt(xival)
    for _ in range(4):
        acosh_term = mp.acosh(guess / alpha) if guess > alpha else mp.mpf(0)
        rhs = 2 * xival + alpha2 * acosh_term
        guess = mp.sqrt((alpha2 + mp.sqrt(alpha2 * alpha2 + 4 * rhs * rhs)) / 2)

    def f(c):
        return c * mp.sqrt(c * c - alpha2) / 2 - alpha2 * mp.acosh(c / alpha) / 2 - xival

    def fp(c):
        return mp.sqrt(c * c - alpha2)

    tol = mp.mpf(10) ** (-mp.mp.dps + 3)
    root = newton_solve(f, fp, guess, tol)
    return mp.mpf(root.real) if isinstance(root, mp.mpc) else root


def _fill(params: Params, z, zeta_val, xi_val) -> TpPoint:
    X = X_of(params, z)
    w = w_of(params, zeta_val)
    beta = _beta_from(z, X)
    betahat = mp.inf if w == 0 else 1 / (w * (zeta_val + w))
    return TpPoint(z=z, xi=xi_val, zeta=zeta_val, beta=beta, betahat=betahat, X=X)


def zeta(params: Params, z, hint=None) -> TpPoint:
    """Solve the implicit relation for zeta(z) and bundle the point geometry.

    Real arguments use the closed-form oscillatory/monotonic equations; points
    within SWITCH_RADIUS of a turning point route through zeta_taylor; complex
    points continue xi from the real anchor and chain Newton steps (``hint``
    seeds the iteration when supplied).
    """
    a, alpha = params.a, params.alpha
    real = _is_real(z)
    if real:
        z = mp.mpf(z.real) if isinstance(z, mp.mpc) else mp.mpf(z)
        if abs(z) >= 1:
            raise DomainError("zeta is defined for |Re z| < 1 on the real axis")
    else:
        z = mp.mpc(z)

    if a == 0:
        if real:
            if z == 0:
                zv = mp.mpf(0)
            else:
                zv = mp.sign(z) * mp.sqrt(-mp.log((1 - z) * (1 + z)))
            return _fill(params, z, zv, xi(a, z))
        ratio = -mp.log(1 - z * z) / (z * z) if abs(z) > mp.mpf("1e-5") else 1 + z * z / 2 + z ** 4 / 3
        return _fill(params, z, z * mp.sqrt(ratio), xi(a, z))

    switch = min(SWITCH_RADIUS, a, control_radius(params, "turning_point"))
    if abs(z - a) < switch or abs(z + a) < switch:
        mirror = abs(z + a) < abs(z - a)
        zv = zeta_taylor(params, -z if mirror else z, center="turning_point")
        if mirror:
            zv = -zv
        xi_val = xi(a, z, side=1) if real else xi(a, z)
        return _fill(params, z, zv, xi_val)

    if real:
        if abs(z) < a:
            zv = _solve_oscillatory(params, z)
        elif z > a:
            zv = _solve_monotonic(params, z)
        else:
            zv = -_solve_monotonic(params, -z)
        return _fill(params, z, zv, xi(a, z, side=1))

    xi_val = xi(a, z)
    tol = mp.mpf(10) ** (-mp.mp.dps + 4)
    if hint is not None:
        hint = mp.mpc(hint)
        if z.imag != 0 and mp.sign(hint.imag) == -mp.sign(z.imag):
            hint = mp.conj(hint)
        ref = mp.log(hint + w_of(params, hint)).imag
        if z.imag != 0:
            ref = mp.sign(z.imag) * abs(ref)
        zv = newton_solve(
            lambda c: _phi_near(params, c, ref) - xi_val,
            lambda c: w_of(params, c),
            hint,
            tol,
        )
        return _fill(params, z, zv, xi_val)
    anchor = (1 + a) / 2
    start = _fill(params, anchor, mp.mpc(_solve_monotonic(params, anchor)), xi(a, anchor))
    s = mp.sign(z.imag)
    lift = mp.mpf("0.3")
    legs = [mp.mpc(anchor, s * lift), mp.mpc(z.real, s * max(lift, abs(z.imag))), z]
    waypoints = []
    prev = mp.mpc(anchor)
    for corner in legs:
        span = abs(corner - prev)
        steps = max(1, int(mp.ceil(span / mp.mpf("0.2"))))
        waypoints.extend(prev + (corner - prev) * mp.mpf(k) / steps for k in range(1, steps + 1))
        prev = corner
    return _continue_zeta(params, start, waypoints)[-1]


def _series_recip(poly, n):
    """First n coefficients of 1/poly for a polynomial with poly[0] != 0."""
    out = [mp.mpf(0)] * n
    out[0] = 1 / poly[0]
    for k in range(1, n):
        acc = mp.mpf(0)
        for j in range(1, min(k, len(poly) - 1) + 1):
            acc += poly[j] * out[k - j]
        out[k] = -acc / poly[0]
    return out


def _series_mul(A, B, n):
    out = [mp.mpf(0)] * n
    for i, ai in enumerate(A[:n]):
        if ai == 0:
            continue
        top = min(n - i, len(B))
        for j in range(top):
            out[i + j] += ai * B[j]
    return out


def _f_series(a: ExtReal, center: ExtReal, n: int):
    """Taylor coefficients of f(a, center + w) = ((center+w)^2-a^2)/(1-(center+w)^2)^2."""
    num = [center * center - a * a, 2 * center, mp.mpf(1)]
    d = [1 - center * center, -2 * center, mp.mpf(-1)]
    dsq = _series_mul(d, d, 5)
    return _series_mul(num, _series_recip(dsq, n), n)


def _implicit_zeta_series(a: ExtReal, alpha: ExtReal, center: str, nterms: int):
    """Coefficients t_0..t_{nterms} of zeta about the center, solving
    (zeta^2 - alpha^2) zeta'^2 = f(a, z) order by order."""
    if center == "turning_point" and a > 0:
        F = _f_series(a, a, nterms + 2)
        t0 = alpha
        t1 = mp.cbrt(F[1] / (2 * alpha))
        parity = 1
        match = lambda k: k
        lin = lambda k: 2 * alpha * t1 * t1 * (2 * k + 1)
    elif a > 0:
        F = _f_series(a, mp.mpf(0), nterms + 2)
        t0 = mp.mpf(0)
        t1 = a / alpha
        parity = 2
        match = lambda k: k - 1
        lin = lambda k: -2 * alpha * alpha * t1 * k
    else:
        F = _f_series(mp.mpf(0), mp.mpf(0), nterms + 4)
        t0 = mp.mpf(0)
        t1 = mp.mpf(1)
        parity = 2
        match = lambda k: k + 1
        lin = lambda k: 2 * (k + 1)
    t = [t0, t1]
    for k in range(2, nterms + 1):
        if (k - 1) % parity != 0:
            t.append(mp.mpf(0))
            continue
        order = match(k)
        nn = order + 1
        zc = (t + [mp.mpf(0)])[:nn] if len(t) < nn else t[:nn]
        zc = zc + [mp.mpf(0)] * (nn - len(zc))
        zp = [(j + 1) * (zc[j + 1] if j + 1 < nn else mp.mpf(0)) for j in range(nn)]
        sq = _series_mul(zc, zc, nn)
        sq[0] -= alpha * alpha
        lhs = _series_mul(sq, _series_mul(zp, zp, nn), nn)
        resid = (F[order] if order < len(F) else mp.mpf(0)) - lhs[order]
        t.append(resid / lin(k))
    return t


def _zeta_series(params: Params, center: str):
    a = params.a
    nterms = 120 if center == "turning_point" else 64
    key = (mp.nstr(a, 30), center, mp.mp.dps, nterms)
    if key not in _SERIES_CACHE:
        with mp.workdps(mp.mp.dps + 25):
            _SERIES_CACHE[key] = _implicit_zeta_series(a, params.alpha, center, nterms)
    return _SERIES_CACHE[key]


def control_radius(params: Params, center: str) -> ExtReal:
    if center == "origin" or params.a == 0:
        return CONTROL_RADIUS_ORIGIN
    return min((1 - params.a) / 2, mp.mpf("1.6") * params.a)


def zeta_taylor(params: Params, z, center: str) -> ExtComplex:
    """zeta via the Taylor series about z=0 or z=a.

    Parameters
    ----------
    center : "origin" or "turning_point"
        Expansion center.  For a = 0 the two centers coincide.

    Raises
    ------
    RangeError
        If the point lies outside the documented control radius.
    """
    if center not in ("origin", "turning_point"):
        raise DomainError("center must be 'origin' or 'turning_point'")
    if params.a == 0:
        center = "origin"
    z = mp.mpf(z) if _is_real(z) else mp.mpc(z)
    w = z if center == "origin" else z - params.a
    if abs(w) > control_radius(params, center):
        raise RangeError("point outside the Taylor control radius; use the implicit solver")
    t = _zeta_series(params, center)
    acc = mp.mpf(0)
    for c in reversed(t):
        acc = acc * w + c
    return acc


def _ln_near(params: Params, c, ref_imag):
    """Principal log of zeta+w shifted by a multiple of 2*pi*i to land within
    pi of the reference imaginary part (branch continuation helper)."""
    pr = mp.log(c + w_of(params, c))
    return pr + 2 * mp.pi * mp.mpc(0, 1) * mp.nint((ref_imag - pr.imag) / (2 * mp.pi))


def _phi_near(params: Params, c, ref_imag):
    alpha = params.alpha
    if alpha == 0:
        return c * c / 2
    return c * w_of(params, c) / 2 - alpha * alpha * (_ln_near(params, c, ref_imag) - mp.log(alpha)) / 2


def _continue_zeta(params: Params, start: TpPoint, waypoints) -> list:
    """Continue zeta from a resolved start point through the waypoints,
    accumulating xi along chords and keeping the log branch continuous."""
    h = _sqrt_f(params.a)
    tol = mp.mpf(10) ** (-mp.mp.dps + 4)
    out = []
    prev_z = start.z
    cur_xi = start.xi
    cur_zeta = mp.mpc(start.zeta)
    alpha = params.alpha
    ref = mp.mpf(0) if alpha == 0 else mp.log(cur_zeta + w_of(params, cur_zeta)).imag
    for znext in waypoints:
        cur_xi = cur_xi + mp.quad(h, [prev_z, znext])
        target_xi, frozen_ref = cur_xi, ref

        def f(c):
            return _phi_near(params, c, frozen_ref) - target_xi

        cur_zeta = newton_solve(f, lambda c: w_of(params, c), cur_zeta, tol)
        if alpha != 0:
            ref = _ln_near(params, cur_zeta, frozen_ref).imag
        out.append(_fill(params, znext, cur_zeta, cur_xi))
        prev_z = znext
    return out


def zeta_path(params: Params, points) -> list:
    """March zeta along an ordered list of points.

    The first point is resolved from scratch; each subsequent point reuses
    the previous zeta as Newton hint, so a contour sampled densely enough
    keeps the branch choice single valued around the cut collar.  Output
    order matches input order.
    """
    if not points:
        return []
    out = [zeta(params, points[0])]
    for z in points[1:]:
        out.append(zeta(params, z, hint=out[-1].zeta))
    return out
