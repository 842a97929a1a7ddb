"""Exact-rational coefficient tables for the asymptotic expansions.

Three families of Liouville-Green coefficient polynomials are generated by
the same first-order recursion with different seeds and different rational
functions G:

* ``pcf_e``      e_s(alphahat, betahat), the parabolic cylinder U-channel;
* ``pcf_etilde`` etilde_s, the derivative channel;
* ``legendre_E`` E_s(a, beta) for the Legendre equation.

Every polynomial is stored densely as Fraction coefficients of
beta^k * t^j, where t is the squared parameter (a^2 or alphahat^2), so the
recursion involves no rounding at all.  The d-constants that tie the two
normalizations together are generated exactly as Laurent polynomials in
T = (4 - alpha^2)/2 from the Stirling series of ln Gamma.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .numerics import DomainError, ExtComplex, ExtReal, RangeError, frac_to_mp, log_gamma
from .tpgeom import Params, TpPoint

MAX_D_ORDER = 9


def _pnew():
    return []


def _pget(P, k, j):
    if k < len(P) and j < len(P[k]):
        return P[k][j]
    return Fraction(0)


def _pset(P, k, j, val):
    while len(P) <= k:
        P.append([])
    row = P[k]
    while len(row) <= j:
        row.append(Fraction(0))
    row[j] = val


def _padd(P, Q):
    R = _pnew()
    for k in range(max(len(P), len(Q))):
        cols = max(len(P[k]) if k < len(P) else 0, len(Q[k]) if k < len(Q) else 0)
        for j in range(cols):
            v = _pget(P, k, j) + _pget(Q, k, j)
            if v:
                _pset(R, k, j, v)
    return R


def _pmul(P, Q):
    R = _pnew()
    for k1, row1 in enumerate(P):
        for j1, c1 in enumerate(row1):
            if not c1:
                continue
            for k2, row2 in enumerate(Q):
                for j2, c2 in enumerate(row2):
                    if c2:
                        _pset(R, k1 + k2, j1 + j2, _pget(R, k1 + k2, j1 + j2) + c1 * c2)
    return R


def _pscale(P, c):
    return [[ci * c for ci in row] for row in P]


def _pdiff_beta(P):
    R = _pnew()
    for k in range(1, len(P)):
        for j, c in enumerate(P[k]):
            if c:
                _pset(R, k - 1, j, c * k)
    return R


def _pint_beta(P):
    # antiderivative vanishing at beta = 0, which is the normalization
    # fixing the otherwise free integration constants
    R = _pnew()
    for k, row in enumerate(P):
        for j, c in enumerate(row):
            if c:
                _pset(R, k + 1, j, c / (k + 1))
    return R


def _mono(k, j, c):
    P = _pnew()
    _pset(P, k, j, Fraction(c))
    return P


@dataclass(frozen=True)
class CoeffPoly:
    """One coefficient polynomial: Fraction coefficients of var^k * t^j.

    ``variable`` records which of beta/betahat the polynomial acts on and
    ``t`` is the matching squared parameter (a^2 or alphahat^2).
    """

    index: int
    variable: str
    table: tuple

    @property
    def degree(self) -> int:
        return len(self.table) - 1

    def eval(self, var, t) -> ExtComplex:
        """Evaluate at numeric (var, t) by Horner in var."""
        acc = mp.mpc(0)
        for row in reversed(self.table):
            cj = mp.mpc(0)
            tp = mp.mpf(1)
            for c in row:
                if c:
                    cj += frac_to_mp(c) * tp
                tp *= t
            acc = acc * var + cj
        return acc

    def eval_exact(self, var: Fraction, t: Fraction) -> Fraction:
        """Evaluate at rational points without rounding."""
        acc = Fraction(0)
        for row in reversed(self.table):
            cj = Fraction(0)
            tp = Fraction(1)
            for c in row:
                cj += c * tp
                tp *= t
            acc = acc * var + cj
        return acc


def _e_seeds():
    e1 = _pmul(_mono(1, 0, Fraction(1, 24)),
               _padd(_padd(_mono(2, 2, 5), _mono(1, 1, 15)), _mono(0, 0, 9)))
    br = _padd(_mono(1, 1, 1), _mono(0, 0, 2))
    e2 = _pmul(_pmul(_mono(2, 0, Fraction(1, 16)), _pmul(br, br)),
               _padd(_padd(_mono(2, 2, 5), _mono(1, 1, 10)), _mono(0, 0, 3)))
    return [e1, e2]


def _etilde_seeds():
    t1 = _pmul(_mono(1, 0, Fraction(-1, 24)),
               _padd(_padd(_mono(2, 2, 7), _mono(1, 1, 21)), _mono(0, 0, 15)))
    br = _padd(_mono(1, 1, 1), _mono(0, 0, 2))
    t2 = _pmul(_pmul(_mono(2, 0, Fraction(-1, 16)), _pmul(br, br)),
               _padd(_padd(_mono(2, 2, 7), _mono(1, 1, 14)), _mono(0, 0, 5)))
    return [t1, t2]


def _E_seeds():
    E1 = _pmul(_mono(1, 0, Fraction(1, 24)),
               _padd(_padd(_padd(_mono(2, 2, 5), _mono(2, 3, -5)),
                           _padd(_mono(1, 1, 15), _mono(1, 2, -15))),
                     _padd(_mono(0, 1, -12), _mono(0, 0, 9))))
    f1 = _padd(_mono(1, 1, 1), _mono(0, 0, 2))
    f2 = _padd(_padd(_padd(_mono(2, 1, 1), _mono(2, 2, -1)),
                     _padd(_mono(1, 0, 2), _mono(1, 1, -2))), _mono(0, 0, -1))
    f3 = _padd(_padd(_padd(_mono(2, 2, 5), _mono(2, 3, -5)),
                     _padd(_mono(1, 1, 10), _mono(1, 2, -10))),
               _padd(_mono(0, 1, -4), _mono(0, 0, 3)))
    E2 = _pmul(_pmul(_pmul(_mono(1, 0, Fraction(1, 16)), f1), f2), f3)
    return [E1, E2]


_BR = _padd(_mono(1, 1, 1), _mono(0, 0, 2))
_G_PCF = _pmul(_mono(2, 0, 1), _pmul(_BR, _BR))
_G_LEG = _pmul(_pmul(_mono(1, 0, 1), _padd(_mono(1, 1, 1), _mono(0, 0, 2))),
               _padd(_padd(_padd(_mono(2, 1, 1), _mono(2, 2, -1)),
                           _padd(_mono(1, 0, 2), _mono(1, 1, -2))), _mono(0, 0, -1)))

_RAW = {
    "pcf_e": (_e_seeds(), _G_PCF, "betahat"),
    "pcf_etilde": (_etilde_seeds(), _G_PCF, "betahat"),
    "legendre_E": (_E_seeds(), _G_LEG, "beta"),
}
_WRAPPED: dict = {k: [] for k in _RAW}


def _extend(kind: str, max_s: int):
    tab, G, variable = _RAW[kind]
    while len(tab) < max_s:
        s = len(tab)
        first = _pscale(_pmul(G, _pdiff_beta(tab[s - 1])), Fraction(1, 2))
        acc = _pnew()
        for j in range(1, s):
            acc = _padd(acc, _pmul(_pdiff_beta(tab[j - 1]), _pdiff_beta(tab[s - j - 1])))
        second = _pscale(_pint_beta(_pmul(G, acc)), Fraction(1, 2))
        tab.append(_padd(first, second))
    wrapped = _WRAPPED[kind]
    while len(wrapped) < len(tab):
        s = len(wrapped)
        wrapped.append(CoeffPoly(index=s + 1, variable=variable,
                                 table=tuple(tuple(row) for row in tab[s])))


def _gen(kind: str, max_s: int):
    if max_s < 2:
        raise DomainError("coefficient generation starts from the two seed polynomials")
    _extend(kind, max_s)
    return list(_WRAPPED[kind][:max_s])


def gen_pcf_e(max_s: int) -> list:
    """Return [e_1, ..., e_max_s] for the parabolic cylinder U-channel.

    The two seeds are fixed polynomials; later entries follow from
    E_{s+1} = (1/2) G E_s' + (1/2) Int_0^beta G sum_j E_j' E_{s-j}' with
    G = betahat^2 (alphahat^2 betahat + 2)^2, all in exact arithmetic with
    the constant of integration fixed by e_s(alphahat, 0) = 0.
    """
    return _gen("pcf_e", max_s)


def gen_pcf_etilde(max_s: int) -> list:
    """Return [etilde_1, ..., etilde_max_s], the derivative-channel analogue
    of gen_pcf_e (same recursion, different seeds)."""
    return _gen("pcf_etilde", max_s)


def gen_leg_E(max_s: int) -> list:
    """Return [E_1, ..., E_max_s] for the Legendre equation, polynomials in
    beta with coefficients rational in a^2."""
    return _gen("legendre_E", max_s)


def combined_E(params: Params, tp: TpPoint, s: int, kind: str) -> ExtComplex:
    """The combined coefficient at one point: E_s(a, beta) plus
    (-1)^s e_s(alpha, betahat) for kind="plain", or with etilde_s for
    kind="tilde".

    Tables must already be generated up to index s (RangeError otherwise).
    """
    if kind not in ("plain", "tilde"):
        raise DomainError("kind must be 'plain' or 'tilde'")
    pcf_kind = "pcf_e" if kind == "plain" else "pcf_etilde"
    if s < 1:
        raise RangeError("coefficient index must be >= 1")
    if s > len(_WRAPPED["legendre_E"]) or s > len(_WRAPPED[pcf_kind]):
        raise RangeError(f"coefficient tables not generated up to s={s}")
    a2 = params.a * params.a
    alpha2 = params.alpha * params.alpha
    leg = _WRAPPED["legendre_E"][s - 1].eval(tp.beta, a2)
    pcf = _WRAPPED[pcf_kind][s - 1].eval(tp.betahat, alpha2)
    return leg + (-1) ** s * pcf


_BERNOULLI = {1: Fraction(1, 6), 2: Fraction(-1, 30), 3: Fraction(1, 42),
              4: Fraction(-1, 30), 5: Fraction(5, 66)}

_D_LAURENT: dict = {}


def _d_laurent():
    """Laurent coefficients in T = (4 - alpha^2)/2 of the u^-order terms of
    (1/2) ln(C1/C2), from the Stirling series of ln Gamma.  Even orders
    cancel identically; only odd entries are nonzero."""
    if _D_LAURENT:
        return _D_LAURENT
    out: dict = {}

    def add(order, tpow, val):
        if order > MAX_D_ORDER:
            return
        out.setdefault(order, {})
        out[order][tpow] = out[order].get(tpow, Fraction(0)) + val

    # (1/2) u T ln(1 + 1/(2uT)) - 1/4 contributes for j >= 2
    for j in range(2, MAX_D_ORDER + 2):
        add(j - 1, 1 - j, Fraction((-1) ** (j + 1), 2) * Fraction(1, 2 ** j) / j)
    # (1/2)[S(uT + 1/2) - 2 S(u)] with S the Stirling tail sum_k g_k x^(1-2k)
    for k in range(1, (MAX_D_ORDER + 1) // 2 + 1):
        gk = _BERNOULLI[k] / (2 * k * (2 * k - 1))
        binom = Fraction(1)
        for m in range(0, MAX_D_ORDER - (2 * k - 1) + 1):
            if m > 0:
                binom *= Fraction(1 - 2 * k - (m - 1), m)
            add(2 * k - 1 + m, 1 - 2 * k - m, Fraction(1, 2) * gk * binom * Fraction(1, 2 ** m))
        add(2 * k - 1, 0, -gk)
    for order in list(out):
        if order % 2 == 0:
            total = sum(abs(v) for v in out[order].values())
            if total != 0:
                raise ArithmeticError("even-order d coefficient failed to cancel")
            del out[order]
    _D_LAURENT.update(out)
    return _D_LAURENT


def _d_value(order: int, alpha2) -> ExtReal:
    """d_order(alpha) for odd order <= MAX_D_ORDER, exact table, numeric T."""
    if order % 2 == 0 or not 1 <= order <= MAX_D_ORDER:
        raise RangeError(f"d-constants exist for odd orders 1..{MAX_D_ORDER}")
    T = (4 - mp.mpf(alpha2)) / 2
    acc = mp.mpf(0)
    for tpow, c in sorted(_d_laurent()[order].items()):
        acc += frac_to_mp(c) * mp.power(T, tpow)
    return acc


@dataclass(frozen=True)
class DConstants:
    """The three tabulated normalization constants, evaluated at one alpha."""

    d1: ExtReal
    d3: ExtReal
    d5: ExtReal


def d_constants(alpha) -> DConstants:
    """Evaluate d1, d3, d5 at the given alpha in [0, sqrt(2))."""
    alpha = mp.mpf(alpha)
    if alpha < 0 or alpha * alpha >= 2:
        raise DomainError("require 0 <= alpha < sqrt(2)")
    a2 = alpha * alpha
    return DConstants(d1=_d_value(1, a2), d3=_d_value(3, a2), d5=_d_value(5, a2))


def d_check(u, alpha) -> ExtReal:
    """Residual of the normalization identity after the three d-constants.

    Computes (1/2) ln(C1/C2) from the exact gamma-function form and
    subtracts d1/u + d3/u^3 + d5/u^5; the remainder decays like u^-7.
    """
    with mp.workdps(mp.mp.dps + 20):
        u = mp.mpf(u)
        alpha = mp.mpf(alpha)
        mu = u * (1 - alpha * alpha / 2)
        lhs = (mp.log(2) / 2 + mp.log(mp.pi) / 2 + (mu - u) + (2 * u - 1) * mp.log(u)
               - (u + mu) * mp.log(u + mu) - 2 * log_gamma(u) + log_gamma(u + mu + mp.mpf("0.5"))) / 2
        d = d_constants(alpha)
        resid = lhs - (d.d1 / u + d.d3 / u ** 3 + d.d5 / u ** 5)
    return +resid


def dump_coeffs(kind: str, max_s: int) -> list:
    """Render a table as exact rational text, one monomial per line:
    ``s k j num/den`` for the coefficient of var^k t^j in the s-th entry."""
    table = _gen(kind, max_s)
    lines = []
    for poly in table:
        for k, row in enumerate(poly.table):
            for j, c in enumerate(row):
                if c:
                    lines.append(f"{poly.index} {k} {j} {c.numerator}/{c.denominator}")
    return lines
