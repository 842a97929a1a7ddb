"""Command line front end.

Subcommands:

``eval``
    Evaluate P, Q or P' at one point, optionally checked against the
    reference oracles.
``error-plot``
    Sweep a grid of x and write a CSV of the envelope-normalized error
    (base-10 log) together with the asymptotic value, the reference value
    and the envelope itself.
``selftest``
    Run the named invariant suite across every module and print a
    pass/fail table.
``coeffs``
    Dump a generated coefficient table in exact rational form.

Exit codes: 0 success, 1 self-test failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import coeffs, legendre, numerics, oracle, pcf, tpgeom
from .numerics import DomainError, InconsistencyError, mp

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3

GRID_SNAP = mp.mpf("1e-9")


def _sci(v, d: int) -> str:
    """Deterministic scientific-notation rendering with d significant digits."""
    v = mp.mpf(v)
    if mp.isnan(v):
        return "nan"
    if mp.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v == 0:
        return "0.0e+0"
    return mp.nstr(v, d, min_fixed=1, max_fixed=0, strip_zeros=False)


def _meta_line(params, terms: int, digits: int) -> str:
    return (f"# meta: nu={mp.nstr(params.nu, digits)}, a={mp.nstr(params.a, digits)}, "
            f"mu={mp.nstr(params.mu, digits)}, terms={terms}, digits={digits}")


def _make_params(args) -> tpgeom.Params:
    if (args.a is None) == (args.mu is None):
        raise DomainError("exactly one of --a or --mu is required")
    if args.a is not None:
        return tpgeom.params_from_nu_a(args.nu, args.a)
    return tpgeom.params_from_nu_mu(args.nu, args.mu)


def _add_param_flags(sub) -> None:
    sub.add_argument("--nu", required=True, help="degree (nonnegative real)")
    sub.add_argument("--a", help="turning point location in (0, 1)")
    sub.add_argument("--mu", help="order (alternative to --a)")
    sub.add_argument("--terms", type=int, default=legendre.MAX_TERMS,
                     help="retained expansion terms, 1..4 (default 4)")
    sub.add_argument("--digits", type=int, default=numerics.DEFAULT_DIGITS,
                     help="working precision in decimal digits (default 40)")


def cmd_eval(args) -> int:
    numerics.set_digits(args.digits)
    params = _make_params(args)
    x = mp.mpf(args.x)
    evaluators = {"P": legendre.eval_P, "Q": legendre.eval_Q,
                  "Pprime": legendre.eval_P_prime}
    references = {"P": oracle.ferrers_P_ref, "Q": oracle.ferrers_Q_ref,
                  "Pprime": oracle.ferrers_P_prime_ref}
    t0 = time.perf_counter()
    val = evaluators[args.function](params, x, args.terms)
    t1 = time.perf_counter()
    print(_meta_line(params, args.terms, args.digits))
    print(f"{args.function}({mp.nstr(x, 12)}) = {_sci(val, args.digits)}")
    print(f"time_asymptotic_s = {t1 - t0:.3f}")
    if args.check:
        t2 = time.perf_counter()
        ref = references[args.function](params, x)
        t3 = time.perf_counter()
        rel = abs(val - ref) / abs(ref) if ref != 0 else abs(val)
        print(f"reference = {_sci(ref, args.digits)}")
        print(f"rel_error = {_sci(rel, 3)}")
        print(f"time_reference_s = {t3 - t2:.3f}")
    return EXIT_OK


def _grid(start, stop, step):
    if step <= 0:
        raise DomainError("--grid-step must be positive")
    out = []
    k = 0
    while True:
        x = start + k * step
        if x > stop + step * GRID_SNAP:
            return out
        out.append(x)
        k += 1


def cmd_error_plot(args) -> int:
    numerics.set_digits(args.digits)
    params = _make_params(args)
    start = mp.mpf(args.grid_start)
    stop = mp.mpf(args.grid_stop)
    step = mp.mpf(args.grid_step)
    grid = _grid(start, stop, step)
    for x in grid:
        if x < 0 or x > 1 - legendre.ENDPOINT_GUARD:
            raise DomainError("grid points must lie in [0, 1 - 10^-3]")
    # Sequential sweep in ascending order: the precision state is global,
    # and identical flags must give byte-identical output.
    rows = []
    for x in grid:
        env = legendre.envelope(params, x, args.terms)
        approx = legendre.eval_P(params, x, args.terms)
        with mp.extradps(10):
            ref = oracle.ferrers_P_ref(params, x)
            delta = approx - ref
        omega = mp.mpf("-inf") if delta == 0 else mp.log10(abs(delta) / env.M)
        rows.append((x, omega, approx, ref, env.M))
    d = args.digits
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(_meta_line(params, args.terms, d) + "\n")
            fh.write("x,omega,asymptotic,reference,envelope\n")
            for row in rows:
                fh.write(",".join(_sci(v, d) for v in row) + "\n")
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_coeffs(args) -> int:
    if args.max_order < 2:
        raise DomainError("--max-order must be at least 2")
    lines = coeffs.dump_coeffs(args.kind, args.max_order)
    print(f"# kind: {args.kind}, columns: s k j value "
          "(coefficient of var^k t^j in entry s)")
    for line in lines:
        print(line)
    return EXIT_OK


def _require(cond, msg: str) -> None:
    if not cond:
        raise InconsistencyError(msg)


def _default_params():
    return tpgeom.params_from_nu_a(50, "0.5")


def _st_precision_context():
    before = mp.mp.dps
    with numerics.workdps(before + 25):
        _require(mp.mp.dps == before + 25, "workdps did not raise the precision")
    with numerics.extradps(7):
        _require(mp.mp.dps == before + 7, "extradps did not add guard digits")
    _require(mp.mp.dps == before, "precision context leaked")


def _st_newton_root():
    root = numerics.newton_solve(lambda t: t * t - 2, lambda t: 2 * t,
                                 mp.mpf("1.5"), mp.mpf(10) ** (-mp.mp.dps + 2))
    _require(abs(root - mp.sqrt(2)) <= mp.mpf(10) ** (-mp.mp.dps + 4),
             "Newton solve missed sqrt(2)")


def _st_constraint_curve():
    p = _default_params()
    tol = mp.mpf(10) ** (6 - mp.mp.dps)
    _require(abs(p.mu - p.u * mp.sqrt(1 - p.a ** 2)) <= tol * p.u,
             "mu is off the constraint mu = u sqrt(1 - a^2)")
    _require(abs(p.a ** 2 - (p.alpha ** 2 - p.alpha ** 4 / 4)) <= tol,
             "a and alpha are off the constraint curve")


def _st_corresponding_points():
    p = _default_params()
    d = max(abs(tpgeom.zeta(p, p.a).zeta - p.alpha),
            abs(tpgeom.zeta(p, -p.a).zeta + p.alpha))
    _require(d <= mp.mpf("1e-25"), f"zeta(+-a) misses +-alpha by {mp.nstr(d, 3)}")


def _st_phase_quadrature():
    p = _default_params()
    for x in (mp.mpf("0.8"), mp.mpf("0.2")):
        d = abs(tpgeom.xi(p.a, x, side=1) - oracle.xi_quad_ref(p.a, x))
        _require(d <= mp.mpf(10) ** (8 - mp.mp.dps),
                 f"xi and its quadrature check differ by {mp.nstr(d, 3)} at x={x}")


def _st_conjugate_symmetry():
    p = _default_params()
    z = mp.mpc("0.3", "0.2")
    d = abs(tpgeom.zeta(p, mp.conj(z)).zeta - mp.conj(tpgeom.zeta(p, z).zeta))
    _require(d <= mp.mpf(10) ** (8 - mp.mp.dps),
             f"zeta breaks conjugate symmetry by {mp.nstr(d, 3)}")


def _st_seed_tables():
    e1 = coeffs.gen_pcf_e(2)[0].table
    _require(e1[1] == (Fraction(3, 8),) and e1[2] == (Fraction(0), Fraction(5, 8))
             and e1[3] == (Fraction(0), Fraction(0), Fraction(5, 24)),
             "first cylinder seed polynomial is wrong")
    E1 = coeffs.gen_leg_E(2)[0].table
    _require(E1[1] == (Fraction(3, 8), Fraction(-1, 2)),
             "first Legendre seed polynomial is wrong")
    t1 = coeffs.gen_pcf_etilde(2)[0].table
    _require(t1[1] == (Fraction(-5, 8),),
             "first derivative-channel seed polynomial is wrong")


def _st_beta_zero_vanish():
    for kind in ("pcf_e", "pcf_etilde", "legendre_E"):
        for poly in coeffs._gen(kind, 6):
            row0 = poly.table[0] if poly.table else ()
            _require(all(c == 0 for c in row0),
                     f"{kind} entry {poly.index} does not vanish at beta = 0")


def _st_d_zero_limits():
    d = coeffs.d_constants(0)
    tol = mp.mpf(10) ** (4 - mp.mp.dps)
    _require(abs(d.d1 + mp.mpf(3) / 32) <= tol, "d1(0) != -3/32")
    _require(abs(d.d3 - mp.mpf(3) / 1024) <= tol, "d3(0) != 3/1024")


def _st_d_slope():
    alpha = tpgeom.alpha_from_a(mp.mpf("0.5"))
    r3 = coeffs.d_check(mp.mpf("1e3"), alpha)
    r4 = coeffs.d_check(mp.mpf("1e4"), alpha)
    slope = mp.log10(abs(r3) / abs(r4))
    _require(abs(slope - 7) <= mp.mpf("0.3"),
             f"d-constant residual decays like u^-{mp.nstr(slope, 4)}, not u^-7")


def _st_pcf_wronskians():
    r = pcf.pcf_connection_check(mp.mpf("1.2"), mp.mpf("0.9"))
    _require(r <= mp.mpf(10) ** (6 - mp.mp.dps),
             f"cylinder connection residual {mp.nstr(r, 3)}")


def _st_pcf_parity():
    r = pcf.pcf_connection_check(mp.mpf("-5.5"), mp.mpf("0.7"))
    _require(r <= mp.mpf(10) ** (6 - mp.mp.dps),
             f"half-integer parity residual {mp.nstr(r, 3)}")


def _st_pcf_gaussian():
    x = mp.mpf("1.3")
    v = pcf.pcf_eval(mp.mpf("-0.5"), x)
    d = abs(v.U - mp.exp(-x * x / 4))
    _require(d <= mp.mpf(10) ** (6 - mp.mp.dps),
             f"U(-1/2, x) misses exp(-x^2/4) by {mp.nstr(d, 3)}")


def _st_pcf_cancellation_guard():
    # Designed headroom probe: the direct series needs a few digits of slack
    # and the LG fallback geometry is closed off at this (b, x), so the call
    # fails fast at very low working precision instead of returning noise.
    v = pcf.pcf_eval(mp.mpf("-3.2"), mp.mpf("4.6"))
    _require(mp.isfinite(v.U) and mp.isfinite(v.V), "cylinder values not finite")


def _st_oracle_dual_route():
    p = _default_params()
    x = mp.mpf("0.3")
    a = oracle.ferrers_P_ref(p, x)
    b = oracle.legendre_ode_P_ref(p, x)
    _require(abs((a - b) / a) <= mp.mpf("1e-25"),
             f"series and ODE oracles disagree by {mp.nstr(abs((a - b) / a), 3)}")


def _st_oracle_wronskian():
    p = _default_params()
    w2 = oracle.ferrers_wronskian_ref(p, mp.mpf("0.2"))
    w6 = oracle.ferrers_wronskian_ref(p, mp.mpf("0.6"))
    _require(abs((w2 - w6) / w2) <= mp.mpf("1e-25"),
             "reference Wronskian is not x-independent")


def _st_oracle_pcf_route():
    p = _default_params()
    b = p.mu - p.nu - mp.mpf("0.5")
    x = mp.mpf("2.0")
    va = pcf.pcf_eval(b, x)
    vb = oracle.pcf_ode_ref(b, x)
    d = max(abs((va.U - vb.U) / vb.U), abs((va.V - vb.V) / vb.V))
    _require(d <= mp.mpf("1e-25"), f"cylinder series and ODE disagree by {mp.nstr(d, 3)}")


def _st_oscillatory_accuracy():
    p = _default_params()
    x = mp.mpf("0.2")
    val = legendre.eval_P(p, x)
    ref = oracle.ferrers_P_ref(p, x)
    _require(abs((val - ref) / ref) <= mp.mpf("1e-13"),
             f"P off by {mp.nstr(abs((val - ref) / ref), 3)} at x=0.2")


def _st_parity_route():
    p = _default_params()
    x = mp.mpf("0.2")
    val = legendre.eval_P_neg(p, x)
    ref = oracle.ferrers_P_ref(p, -x)
    _require(abs((val - ref) / ref) <= mp.mpf("1e-13"),
             f"P(-x) parity route off by {mp.nstr(abs((val - ref) / ref), 3)}")


def _st_second_kind():
    p = _default_params()
    x = mp.mpf("0.2")
    val = legendre.eval_Q(p, x)
    ref = oracle.ferrers_Q_ref(p, x)
    _require(abs((val - ref) / ref) <= mp.mpf("1e-13"),
             f"Q off by {mp.nstr(abs((val - ref) / ref), 3)} at x=0.2")


def _st_turning_point():
    p = _default_params()
    val = legendre.eval_P(p, p.a)
    ref = oracle.ferrers_P_ref(p, p.a)
    _require(abs((val - ref) / ref) <= mp.mpf("1e-13"),
             f"P off by {mp.nstr(abs((val - ref) / ref), 3)} at the turning point")


def _st_route_seam():
    p = _default_params()
    x = p.a + mp.mpf("0.079")
    t = legendre.ab_taylor(p, x, 4)
    e = legendre.ab_expansion(p, x, 4)
    d = max(abs((t.A - e.A) / e.A), abs((t.B - e.B) / e.B))
    _require(d <= mp.mpf("1e-12"), f"series and expansion routes differ by {mp.nstr(d, 3)}")


def _st_legendre_wronskian():
    p = _default_params()
    vals = []
    for x in (mp.mpf("0.3"), mp.mpf("0.55")):
        w = (1 - x * x) * (legendre.eval_P(p, x) * legendre.eval_Q_prime(p, x)
                           - legendre.eval_P_prime(p, x) * legendre.eval_Q(p, x))
        vals.append(w)
    d = abs((vals[0] - vals[1]) / vals[0])
    _require(d <= mp.mpf("1e-10"), f"assembled Wronskian drifts by {mp.nstr(d, 3)}")


SELFTESTS = (
    ("numerics.precision_context", _st_precision_context),
    ("numerics.newton_root", _st_newton_root),
    ("tpgeom.constraint_curve", _st_constraint_curve),
    ("tpgeom.corresponding_points", _st_corresponding_points),
    ("tpgeom.phase_quadrature", _st_phase_quadrature),
    ("tpgeom.conjugate_symmetry", _st_conjugate_symmetry),
    ("coeffs.seed_tables", _st_seed_tables),
    ("coeffs.beta_zero_vanish", _st_beta_zero_vanish),
    ("coeffs.d_zero_limits", _st_d_zero_limits),
    ("coeffs.d_slope", _st_d_slope),
    ("pcf.wronskians", _st_pcf_wronskians),
    ("pcf.parity", _st_pcf_parity),
    ("pcf.gaussian_case", _st_pcf_gaussian),
    ("pcf.cancellation_guard", _st_pcf_cancellation_guard),
    ("oracle.dual_route_P", _st_oracle_dual_route),
    ("oracle.wronskian_constancy", _st_oracle_wronskian),
    ("oracle.pcf_dual_route", _st_oracle_pcf_route),
    ("legendre.oscillatory_accuracy", _st_oscillatory_accuracy),
    ("legendre.parity_route", _st_parity_route),
    ("legendre.second_kind", _st_second_kind),
    ("legendre.turning_point", _st_turning_point),
    ("legendre.route_seam", _st_route_seam),
    ("legendre.wronskian_constancy", _st_legendre_wronskian),
)


def cmd_selftest(args) -> int:
    numerics.set_digits(args.digits)
    entries = [(n, f) for n, f in SELFTESTS if args.filter in n]
    if not entries:
        print(f"no self-tests match filter {args.filter!r}", file=sys.stderr)
        return EXIT_USAGE
    width = max(len(n) for n, _ in entries)
    failures = []
    for name, fn in entries:
        t0 = time.perf_counter()
        try:
            fn()
        except Exception as exc:
            status = f"FAIL  {type(exc).__name__}: {exc}"
            failures.append(name)
        else:
            status = "ok"
        print(f"{name:<{width}}  {time.perf_counter() - t0:7.2f}s  {status}")
    if failures:
        print(f"{len(failures)} of {len(entries)} self-tests failed: "
              + ", ".join(failures))
        return EXIT_FAIL
    print(f"all {len(entries)} self-tests passed")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="legasym",
        description="Ferrers functions of large degree by uniform "
                    "parabolic-cylinder asymptotics")
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate P, Q or P' at one point")
    _add_param_flags(pe)
    pe.add_argument("--x", required=True, help="argument, |x| <= 1 - 10^-3")
    pe.add_argument("--function", choices=("P", "Q", "Pprime"), default="P")
    pe.add_argument("--check", action="store_true",
                    help="also evaluate the reference oracle and report the "
                         "relative error")
    pe.set_defaults(handler=cmd_eval)

    pp = sub.add_parser("error-plot",
                        help="write a CSV sweep of the normalized error")
    _add_param_flags(pp)
    pp.add_argument("--grid-start", required=True)
    pp.add_argument("--grid-stop", required=True)
    pp.add_argument("--grid-step", required=True)
    pp.add_argument("--out", required=True, help="output CSV path")
    pp.set_defaults(handler=cmd_error_plot)

    ps = sub.add_parser("selftest", help="run the cross-module invariant suite")
    ps.add_argument("--filter", default="",
                    help="run only self-tests whose name contains this string")
    ps.add_argument("--digits", type=int, default=numerics.DEFAULT_DIGITS)
    ps.set_defaults(handler=cmd_selftest)

    pc = sub.add_parser("coeffs", help="dump a coefficient table as exact rationals")
    pc.add_argument("--kind", choices=("legendre_E", "pcf_e", "pcf_etilde"),
                    required=True)
    pc.add_argument("--max-order", type=int, default=4,
                    help="number of table entries to generate (default 4)")
    pc.set_defaults(handler=cmd_coeffs)
    return ap


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.handler(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
