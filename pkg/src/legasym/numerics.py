"""Extended-precision arithmetic substrate: precision control, exact rationals,
adaptive quadrature, Newton root finding, and log-gamma.

Real and complex scalars are mpmath ``mpf``/``mpc`` values; exact rationals are
``fractions.Fraction``.  Precision is a global, explicit configuration measured
in significant decimal digits (default 40).
"""
from __future__ import annotations

from fractions import Fraction

import mpmath as mp

ExtReal = mp.mpf
ExtComplex = mp.mpc
Rational = Fraction

DEFAULT_DIGITS = 40

mp.mp.dps = DEFAULT_DIGITS


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class RangeError(ValueError):
    """An argument lies outside the documented validity envelope."""


class BranchAmbiguityError(ValueError):
    """A point sits on a branch cut and no side flag was supplied."""


class GeometryError(ValueError):
    """A contour or region parameter violates its geometric constraints."""


class ToleranceError(ArithmeticError):
    """An iterative scheme could not reach the requested tolerance."""


class PrecisionLossError(ArithmeticError):
    """Cancellation exceeds what the active working precision can absorb."""


class InconsistencyError(ArithmeticError):
    """An internal cross-check failed, signaling a branch or logic bug."""


class SearchError(RuntimeError):
    """A bracketing or scanning search failed to locate its target."""


class RootNotFoundError(ArithmeticError):
    """Newton iteration diverged; carries the last iterate as ``last``."""

    def __init__(self, message: str, last=None):
        super().__init__(message)
        self.last = last


def set_digits(digits: int) -> None:
    """Set the global working precision in significant decimal digits."""
    if digits < 10:
        raise DomainError("working precision below 10 digits is not supported")
    mp.mp.dps = digits


def digits() -> int:
    """Return the current global working precision in decimal digits."""
    return mp.mp.dps


def workdps(d: int):
    """Context manager running its body at ``d`` decimal digits."""
    return mp.workdps(d)


def extradps(d: int):
    """Context manager adding ``d`` guard digits to the working precision."""
    return mp.extradps(d)


def mpf(x) -> ExtReal:
    return mp.mpf(x)


def mpc(x, y=0) -> ExtComplex:
    return mp.mpc(x, y)


def frac_to_mp(q: Fraction) -> ExtReal:
    """Convert an exact rational to a float at working precision."""
    return mp.mpf(q.numerator) / mp.mpf(q.denominator)


def quad_adaptive(f, lo, hi, tol) -> ExtReal:
    """Integrate ``f`` over the real interval [lo, hi] to absolute error <= tol.

    Parameters
    ----------
    f : callable
        Integrand, analytic on (lo, hi); integrable square-root endpoint
        singularities are allowed (tanh-sinh nodes never touch the endpoints).
    lo, hi : real
        Integration limits.
    tol : real
        Absolute error target.

    Returns
    -------
    ExtReal
        The integral value.

    Raises
    ------
    ToleranceError
        If the estimated error still exceeds ``tol`` after maximal refinement.
    """
    tol = mp.mpf(tol)
    for extra in (10, 25, 45):
        with mp.workdps(mp.mp.dps + extra):
            val, err = mp.quad(f, [mp.mpf(lo), mp.mpf(hi)], error=True)
            if err <= tol / 4:
                return +mp.mpf(val)
    raise ToleranceError(f"quadrature error estimate {mp.nstr(err, 5)} exceeds tol {mp.nstr(tol, 5)}")


def newton_solve(f, fprime, x0, tol, max_iter: int = 120) -> ExtComplex:
    """Solve f(x) = 0 by Newton's method from ``x0``.

    Accepts the root once |f(x)| <= tol.  For real iterations that fail to
    converge, a bisection fallback engages on any sign change observed along
    the trajectory.

    Raises
    ------
    RootNotFoundError
        On divergence; the exception carries the last iterate in ``.last``.
    """
    tol = mp.mpf(tol)
    x = mp.mpc(x0) if isinstance(x0, mp.mpc) else mp.mpf(x0)
    is_real = not isinstance(x, mp.mpc)
    seen = []
    for _ in range(max_iter):
        fx = f(x)
        if abs(fx) <= tol:
            return x
        if is_real:
            seen.append((x, fx))
        d = fprime(x)
        if d == 0:
            break
        step = fx / d
        x = x - step
        if abs(step) <= mp.mpf(10) ** (-mp.mp.dps) * max(abs(x), mp.mpf(1)) and abs(f(x)) <= tol:
            return x
    if is_real:
        seen.sort(key=lambda p: p[0])
        for (xa, fa), (xb, fb) in zip(seen, seen[1:]):
            if mp.sign(fa) * mp.sign(fb) < 0:
                for _ in range(4 * mp.mp.dps):
                    xm = (xa + xb) / 2
                    fm = f(xm)
                    if abs(fm) <= tol:
                        return xm
                    if mp.sign(fa) * mp.sign(fm) < 0:
                        xb, fb = xm, fm
                    else:
                        xa, fa = xm, fm
                break
    raise RootNotFoundError(f"Newton iteration did not converge (last residual {mp.nstr(abs(f(x)), 5)})", last=x)


def log_gamma(x) -> ExtReal:
    """Return ln Gamma(x) for real x > 0.

    Raises
    ------
    DomainError
        If x <= 0.
    """
    x = mp.mpf(x)
    if x <= 0:
        raise DomainError("log_gamma requires a positive real argument")
    return mp.loggamma(x)
