"""Tests for the turning-point geometry: parameter coupling, xi, zeta,
Taylor series, branch handling, and path continuation."""
from __future__ import annotations

import mpmath as mp
import pytest

from legasym import numerics, tpgeom
from legasym.numerics import BranchAmbiguityError, DomainError, RangeError, quad_adaptive
from legasym.tpgeom import (
    Params,
    alpha_from_a,
    control_radius,
    params_from_nu_a,
    params_from_nu_mu,
    sqrt_pair,
    xi,
    zeta,
    zeta_path,
    zeta_taylor,
)

# Independently published value of mu for nu=50, a=1/2.
MU_05 = mp.mpf("43.73428289111415166156802012302327726531")


def phase_monotonic(alpha, zv):
    """int_alpha^zeta sqrt(t^2-alpha^2) dt in closed form, zeta >= alpha."""
    w = mp.sqrt((zv - alpha) * (zv + alpha))
    return zv * w / 2 - alpha * alpha / 2 * mp.log((zv + w) / alpha)


def phase_oscillatory(alpha, zv):
    """int_zeta^alpha sqrt(alpha^2-t^2) dt in closed form, |zeta| <= alpha."""
    return (alpha * alpha * mp.acos(zv / alpha) - zv * mp.sqrt((alpha - zv) * (alpha + zv))) / 2


class TestParams:
    def test_mu_from_a(self):
        p = params_from_nu_a(50, "0.5")
        assert p.u == mp.mpf("50.5")
        assert abs(p.mu - MU_05) < mp.mpf("1e-37")

    def test_round_trip_mu_anchor(self):
        p = params_from_nu_mu(50, MU_05)
        assert abs(p.a - mp.mpf("0.5")) < mp.mpf("1e-37")

    def test_constraint_curve(self):
        # a^2 = alpha^2 - alpha^4/4 ties the two turning points together.
        for s in ("0.1", "0.5", "0.8", "0.97"):
            a = mp.mpf(s)
            al2 = alpha_from_a(a) ** 2
            assert abs(a * a - (al2 - al2 * al2 / 4)) < mp.mpf("1e-39"), s

    def test_alpha_special_values(self):
        assert alpha_from_a(0) == 0
        assert abs(alpha_from_a(mp.mpf("0.8")) ** 2 - mp.mpf("0.8")) < mp.mpf("1e-39")

    def test_alpha_dual_route_quadrature(self):
        # alpha^2 equals (2/pi) times the full oscillatory phase integral.
        a = mp.mpf("0.5")
        val = quad_adaptive(
            lambda t: mp.sqrt((a - t) * (a + t)) / ((1 - t) * (1 + t)),
            -a, a, mp.mpf("1e-30"))
        assert abs(alpha_from_a(a) ** 2 - 2 / mp.pi * val) < mp.mpf("1e-28")

    def test_domain_guards(self):
        with pytest.raises(DomainError):
            alpha_from_a(1)
        with pytest.raises(DomainError):
            alpha_from_a("-0.1")
        with pytest.raises(DomainError):
            params_from_nu_a(-1, "0.5")
        with pytest.raises(DomainError):
            params_from_nu_mu(50, 51)
        with pytest.raises(DomainError):
            params_from_nu_mu(50, 0)
        with pytest.raises(DomainError):
            Params(nu=mp.mpf(50), u=mp.mpf("50.5"))

    def test_anchor_sharpens_with_precision(self):
        # Derived quantities are recomputed at the active precision, so the
        # constraint curve holds to the boosted accuracy too.
        p = params_from_nu_a(50, "0.5")
        with numerics.workdps(80):
            al2 = p.alpha ** 2
            resid = abs(p.a ** 2 - (al2 - al2 * al2 / 4))
            assert resid < mp.mpf("1e-78")


class TestSqrtPair:
    def test_real_monotonic_side(self):
        assert abs(sqrt_pair(mp.mpf("0.5"), mp.mpf("1.3")) - mp.mpf("1.2")) < mp.mpf("1e-39")

    def test_cut_upper_limit(self):
        val = sqrt_pair(mp.mpf("0.5"), mp.mpf("0.2"))
        assert abs(val - mp.mpc(0, mp.sqrt(mp.mpf("0.21")))) < mp.mpf("1e-39")

    def test_conjugate_symmetry(self):
        a = mp.mpf("0.5")
        for z in (mp.mpc("0.3", "0.4"), mp.mpc("-0.6", "0.2")):
            assert abs(sqrt_pair(a, mp.conj(z)) - mp.conj(sqrt_pair(a, z))) < mp.mpf("1e-38")

    def test_no_cancellation_at_large_argument(self):
        # betahat = 1/(w(zeta+w)) stays accurate where the naive difference
        # zeta - w would lose most digits.
        alpha = alpha_from_a(mp.mpf("0.5"))
        zv = mp.mpf(1000)
        w = sqrt_pair(alpha, zv)
        bh = 1 / (w * (zv + w))
        assert bh > 0
        assert abs(bh * 2 * zv * zv - 1) < mp.mpf("1e-5")


class TestXi:
    def test_zero_at_turning_point(self):
        assert abs(xi(mp.mpf("0.5"), mp.mpf("0.5"))) < mp.mpf("1e-30")

    def test_a_zero_closed_form(self):
        val = xi(0, mp.mpf("0.6"))
        assert abs(val + mp.log(mp.mpf("0.64")) / 2) < mp.mpf("1e-38")

    def test_monotonic_region_vs_quadrature(self):
        a = mp.mpf("0.5")
        ref = quad_adaptive(
            lambda t: mp.sqrt((t - a) * (t + a)) / ((1 - t) * (1 + t)),
            a, mp.mpf("0.9"), mp.mpf("1e-30"))
        assert abs(xi(a, mp.mpf("0.9")) - ref) < mp.mpf("1e-28")

    def test_oscillatory_region_vs_quadrature(self):
        a = mp.mpf("0.5")
        x = mp.mpf("0.2")
        ref = quad_adaptive(
            lambda t: mp.sqrt((a - t) * (a + t)) / ((1 - t) * (1 + t)),
            x, a, mp.mpf("1e-30"))
        val = xi(a, x, side=1)
        assert abs(val - mp.mpc(0, -1) * ref) < mp.mpf("1e-28")
        assert val.imag < 0

    def test_cut_needs_side_flag(self):
        with pytest.raises(BranchAmbiguityError):
            xi(mp.mpf("0.5"), mp.mpf("0.2"))
        with pytest.raises(BranchAmbiguityError):
            xi(mp.mpf("0.5"), mp.mpf("-0.7"))

    def test_side_flags_conjugate(self):
        a = mp.mpf("0.5")
        for x in (mp.mpf("0.2"), mp.mpf("-0.7")):
            up = xi(a, x, side=1)
            dn = xi(a, x, side=-1)
            assert abs(up - mp.conj(dn)) < mp.mpf("1e-37")

    def test_conjugate_symmetry_off_cut(self):
        a = mp.mpf("0.5")
        for z in (mp.mpc("0.3", "0.4"), mp.mpc("-0.2", "0.5")):
            assert abs(xi(a, mp.conj(z)) - mp.conj(xi(a, z))) < mp.mpf("1e-36")

    def test_domain_guards(self):
        with pytest.raises(DomainError):
            xi(mp.mpf("0.5"), mp.mpf(1))
        with pytest.raises(DomainError):
            xi(mp.mpf("1.2"), mp.mpf("0.3"))


class TestZeta:
    def test_origin_and_turning_point_values(self, p05):
        assert abs(zeta(p05, 0).zeta) < mp.mpf("1e-38")
        assert abs(zeta(p05, mp.mpf("0.5")).zeta - p05.alpha) < mp.mpf("1e-37")

    def test_a_zero_closed_form(self):
        p = params_from_nu_a(50, 0)
        val = zeta(p, mp.mpf("0.6")).zeta
        assert abs(val - mp.sqrt(-mp.log(mp.mpf("0.64")))) < mp.mpf("1e-38")

    def test_region_mapping(self, p05):
        alpha = p05.alpha
        for x in ("-0.3", "0.1", "0.45"):
            zv = zeta(p05, mp.mpf(x)).zeta
            assert -alpha < zv < alpha, x
        for x in ("0.58", "0.75", "0.9"):
            assert zeta(p05, mp.mpf(x)).zeta > alpha, x

    def test_corresponding_points_monotonic(self, p05):
        # The defining relation: the phase integrals on the two sides agree.
        for x in ("0.6", "0.75", "0.9"):
            tp = zeta(p05, mp.mpf(x))
            assert abs(phase_monotonic(p05.alpha, tp.zeta) - tp.xi) < mp.mpf("1e-28"), x

    def test_corresponding_points_oscillatory(self, p05):
        for x in ("0.1", "0.3", "0.45"):
            tp = zeta(p05, mp.mpf(x))
            lhs = phase_oscillatory(p05.alpha, tp.zeta)
            assert abs(lhs - (-tp.xi.imag)) < mp.mpf("1e-28"), x

    def test_bisection_cross_check(self, p05):
        # Invert the monotonic phase equation by plain bisection on zeta.
        x = mp.mpf("0.75")
        target = xi(p05.a, x)
        lo, hi = p05.alpha, mp.mpf(2)
        for _ in range(140):
            mid = (lo + hi) / 2
            if phase_monotonic(p05.alpha, mid) < target:
                lo = mid
            else:
                hi = mid
        assert abs(zeta(p05, x).zeta - (lo + hi) / 2) < mp.mpf("1e-28")

    def test_point_bundle_consistency(self, p05):
        tp = zeta(p05, mp.mpf("0.75"))
        X = sqrt_pair(p05.a, tp.z)
        w = sqrt_pair(p05.alpha, tp.zeta)
        assert abs(tp.X - X) < mp.mpf("1e-38")
        assert abs(tp.beta - 1 / (X * (tp.z + X))) < mp.mpf("1e-38")
        assert abs(tp.betahat - 1 / (w * (tp.zeta + w))) < mp.mpf("1e-38")

    def test_conjugate_symmetry(self, p05):
        for z in (mp.mpc("0.3", "0.4"), mp.mpc("-0.2", "0.5")):
            up = zeta(p05, z).zeta
            dn = zeta(p05, mp.conj(z)).zeta
            assert abs(dn - mp.conj(up)) < mp.mpf("1e-30")

    def test_monotone_on_real_axis(self):
        # zeta is a strictly increasing map of (-1, 1) for every geometry,
        # including a = 0 and a close to 1 where the routing switches collide.
        for s in ("0", "0.1", "0.5", "0.89"):
            p = params_from_nu_a(50, s)
            prev = None
            for k in range(200):
                x = mp.mpf(-99) / 100 + mp.mpf(198) / 100 * mp.mpf(k) / 199
                zv = zeta(p, x).zeta
                if prev is not None:
                    assert zv > prev, f"a={s}, x={mp.nstr(x, 8)}"
                prev = zv

    def test_domain_guard(self, p05):
        with pytest.raises(DomainError):
            zeta(p05, mp.mpf(1))


class TestZetaTaylor:
    def test_zero_at_origin(self, p05):
        assert zeta_taylor(p05, 0, center="origin") == 0

    def test_a_zero_series(self):
        # For a = 0: zeta = z + z^3/4 + 13 z^5/96 + O(z^7).
        p = params_from_nu_a(50, 0)
        z = mp.mpf("0.02")
        model = z + z ** 3 / 4 + 13 * z ** 5 / 96
        assert abs(zeta_taylor(p, z, center="origin") - model) < mp.mpf("1e-12")

    def test_frozen_origin_coefficients(self, p05):
        # Odd series about z = 0 for a = 1/2; values frozen from a 65-digit
        # run of the implicit-series generator.
        t = tpgeom._zeta_series(p05, "origin")
        frozen = {
            1: "0.9659258262890682867497432",
            3: "0.238591858483891456577192",
            5: "0.1286274771842090904298466",
            7: "0.0863387207559506286287692",
        }
        for k, s in frozen.items():
            assert abs(t[k] - mp.mpf(s)) < mp.mpf("1e-20"), k
        for k in (0, 2, 4, 6):
            assert t[k] == 0, k
        # Leading coefficient is a/alpha.
        assert abs(t[1] - p05.a / p05.alpha) < mp.mpf("1e-37")

    def test_frozen_turning_point_coefficients(self, p05):
        t = tpgeom._zeta_series(p05, "turning_point")
        frozen = {
            0: "0.5176380902050415246977977",
            1: "1.197495114967272969921215",
            2: "0.6011366101172076958809875",
            3: "0.8838804216724155360094789",
            4: "1.180350676208859749572368",
        }
        for k, s in frozen.items():
            assert abs(t[k] - mp.mpf(s)) < mp.mpf("1e-20"), k
        assert abs(t[0] - p05.alpha) < mp.mpf("1e-37")

    def test_matches_implicit_solver(self, p05):
        # Compare against zeta() at points the solver resolves by closed-form
        # routes, not by the same Taylor series.
        near_origin = mp.mpf("0.2")
        assert abs(zeta_taylor(p05, near_origin, center="origin")
                   - zeta(p05, near_origin).zeta) < mp.mpf("1e-24")
        near_tp = mp.mpf("0.62")
        assert abs(zeta_taylor(p05, near_tp, center="turning_point")
                   - zeta(p05, near_tp).zeta) < mp.mpf("1e-24")

    def test_control_radius(self, p05):
        assert control_radius(p05, "origin") == mp.mpf("0.25")
        assert control_radius(p05, "turning_point") == mp.mpf("0.25")
        p89 = params_from_nu_a(50, "0.89")
        assert abs(control_radius(p89, "turning_point") - mp.mpf("0.055")) < mp.mpf("1e-39")
        p003 = params_from_nu_a(50, "0.03")
        assert abs(control_radius(p003, "turning_point") - mp.mpf("0.048")) < mp.mpf("1e-39")

    def test_range_and_center_guards(self, p05):
        with pytest.raises(RangeError):
            zeta_taylor(p05, mp.mpf("0.9"), center="turning_point")
        with pytest.raises(RangeError):
            zeta_taylor(p05, mp.mpf("0.3"), center="origin")
        with pytest.raises(DomainError):
            zeta_taylor(p05, mp.mpf("0.1"), center="middle")


class TestZetaPath:
    def test_empty(self, p05):
        assert zeta_path(p05, []) == []

    def test_ring_closure(self, p05):
        # One full revolution around both turning points returns to the same
        # zeta: the phase periods on the two sides match exactly on the
        # constraint curve, so zeta is single valued.
        r = mp.mpf("0.7")
        pts = [r * mp.expjpi(2 * (mp.mpf(k) + mp.mpf("0.5")) / 64)
               for k in range(65)]
        out = zeta_path(p05, pts)
        assert abs(out[-1].zeta - out[0].zeta) < mp.mpf("1e-25")

    def test_path_matches_solo(self, p05):
        r = mp.mpf("0.7")
        pts = [r * mp.expjpi(2 * (mp.mpf(k) + mp.mpf("0.5")) / 64)
               for k in range(65)]
        out = zeta_path(p05, pts)
        for k in (10, 45):
            solo = zeta(p05, pts[k]).zeta
            assert abs(out[k].zeta - solo) < mp.mpf("1e-25"), k
