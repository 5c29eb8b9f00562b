import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.interpolate import CubicSpline

from project.api.exceptions import (
    CorrespondenceGap,
    DegeneratePartner,
    EmptyProfile,
    PartnerSpeedDomain,
    TooFewSamples,
    UnsupportedKind,
    ZeroMu,
    ZeroOffset,
)
from project.api.models.curve import CurveSpec
from project.api.models.frenet import synthetic_profile
from project.api.models.mannheim import CorrespondenceMap
from project.api.v1.check.controllers import mannheim_lambda, mannheim_lambda_3d, mannheim_lambda_4d
from project.api.v1.curve.controllers import sample_curve
from project.api.v1.frame.controllers import curvature_profile
from project.api.v1.partner.controllers import (
    construct_mannheim_from_partner_3d,
    construct_partner,
    construct_partner_3d,
    construct_partner_4d,
)
from project.api.v1.verify.controllers import (
    partner_ode_residual_3d,
    psi_prime_identity_residual,
    verify_pair,
    verify_pair_3d,
    verify_pair_4d,
)
from tests.conftest import (
    circle_document,
    helix_document,
    non_mannheim3_document,
    rotation,
    varying4_document,
)

TOL = 1e-4


def curve_of(document):
    return sample_curve(CurveSpec.model_validate(document))


def asserted_pass(report):
    return all(v.passed for v in report.verdicts.values() if v.asserted)


def values(column):
    return np.array([np.nan if v is None else v for v in column], dtype=float)


@pytest.fixture(scope="module")
def report3(mannheim3_pair):
    alpha, beta, cmap = mannheim3_pair
    return verify_pair_3d(alpha, beta, cmap, TOL)


@pytest.fixture(scope="module")
def report4(mannheim4_pair):
    alpha, beta, cmap = mannheim4_pair
    return verify_pair_4d(alpha, beta, cmap, TOL)


class TestLambdaCheck:
    @pytest.mark.parametrize("a,b", [(2.0, 1.0), (3.0, 1.5)])
    def test_helix_lambda_is_its_radius(self, a, b):
        estimate = mannheim_lambda_3d(curvature_profile(curve_of(helix_document(a, b))), TOL)
        assert estimate.verdict
        assert estimate.lam == pytest.approx(a, rel=1e-6)
        assert estimate.residual_max <= 1e-6

    def test_circle(self):
        estimate = mannheim_lambda(curvature_profile(curve_of(circle_document(R=3.0))), TOL)
        assert estimate.verdict
        assert estimate.lam == pytest.approx(3.0, rel=1e-6)

    def test_synthesized_mannheim_curve(self, mannheim3_curve):
        estimate = mannheim_lambda_3d(curvature_profile(mannheim3_curve), TOL)
        assert estimate.verdict
        assert estimate.lam == pytest.approx(2.0, rel=1e-6)

    def test_varying_ratio_is_rejected(self):
        estimate = mannheim_lambda_3d(curvature_profile(curve_of(non_mannheim3_document(samples=1501))), TOL)
        assert not estimate.verdict
        assert estimate.residual_max > 1e-2

    def test_constant_4d(self, mannheim4_curve):
        estimate = mannheim_lambda_4d(curvature_profile(mannheim4_curve), TOL)
        assert estimate.verdict
        assert estimate.lam == pytest.approx(2.0, rel=1e-6)

    def test_varying_4d_is_rejected(self):
        estimate = mannheim_lambda(curvature_profile(curve_of(varying4_document(samples=2001))), TOL)
        assert not estimate.verdict

    def test_per_sample_series(self):
        s = np.linspace(0.0, 1.0, 11)
        k = np.full(11, 0.4)
        r = np.full(11, 0.2)
        k[3] = np.nan
        estimate = mannheim_lambda_3d(synthetic_profile(s, {"k": k, "r": r}, 3), TOL)
        assert estimate.per_sample[3] is None
        assert estimate.per_sample[0] == pytest.approx(2.0)
        assert estimate.lam == pytest.approx(2.0)

    def test_empty_profiles(self):
        with pytest.raises(EmptyProfile):
            mannheim_lambda_3d(synthetic_profile(np.array([]), {"k": [], "r": []}, 3), TOL)
        s = np.linspace(0.0, 1.0, 5)
        blank = np.full(5, np.nan)
        with pytest.raises(EmptyProfile):
            mannheim_lambda_4d(synthetic_profile(s, {"K": blank, "k": blank, "bitorsion": blank}, 4), TOL)

    def test_dimension_mismatch(self):
        s = np.linspace(0.0, 1.0, 5)
        with pytest.raises(UnsupportedKind):
            mannheim_lambda_4d(synthetic_profile(s, {"k": np.ones(5), "r": np.ones(5)}, 3), TOL)


class TestPartnerConstruction:
    def test_helix_partner_is_its_axis(self, helix_curve):
        beta, cmap = construct_partner_3d(helix_curve, 2.0)
        assert np.max(np.abs(beta.points[:, :2])) <= 1e-9
        speed = np.gradient(cmap.s_star, cmap.s)
        assert np.max(np.abs(speed - math.sqrt(0.2))) <= 1e-8
        k_star = curvature_profile(beta)["k"]
        assert not np.any(k_star > 1e-6)

    def test_circle_partner_collapses(self):
        with pytest.raises(DegeneratePartner):
            construct_partner_3d(curve_of(circle_document(R=2.0)), 2.0)

    def test_zero_offset(self, mannheim3_curve):
        with pytest.raises(ZeroOffset):
            construct_partner(mannheim3_curve, 0.0)

    def test_partner_is_unit_speed(self, mannheim3_pair):
        _, beta, cmap = mannheim3_pair
        assert beta.size == cmap.size
        assert beta.s_grid[0] == 0.0
        assert cmap.s_star[-1] == pytest.approx(beta.length, rel=1e-12)

    def test_partner_speed_domain(self, mannheim4_curve):
        with pytest.raises(PartnerSpeedDomain):
            construct_partner_4d(mannheim4_curve, 3.0)

    def test_dimension_mismatch(self, helix_curve):
        with pytest.raises(UnsupportedKind):
            construct_partner_4d(helix_curve, 2.0)


class TestPair3:
    def test_asserted_verdicts_pass(self, report3):
        assert asserted_pass(report3)
        assert not report3.verdicts["constant_angle"].asserted

    def test_normal_meets_binormal(self, report3):
        assert np.min(values(report3.alignment)) >= 1.0 - 1e-6

    def test_constant_distance(self, report3):
        distance = values(report3.distance_profile)
        assert np.std(distance) / np.mean(distance) <= 1e-6
        assert np.mean(distance) == pytest.approx(2.0, abs=1e-6)
        assert abs(report3.mu) == pytest.approx(2.0, abs=1e-6)

    def test_residuals(self, report3):
        for name in ("partner_ode", "theta_rate", "offset_torsion", "speed_ratio"):
            assert report3.statistics[name]["max"] <= TOL
            assert report3.statistics[name]["count"] > 0.5 * len(report3.s)

    def test_angle_moves(self, report3):
        cos_theta = values(report3.cos_theta_profile)
        assert np.ptp(cos_theta) > 1e-2

    def test_coverage(self, report3):
        assert report3.coverage["alpha"] >= 0.9
        assert report3.coverage["beta"] >= 0.9

    def test_rigid_motion(self, mannheim3_pair, report3):
        alpha, beta, cmap = mannheim3_pair
        rot = rotation([0.2, -1.0, 0.7], 2.3)
        shift = np.array([1.0, 2.0, -3.0])
        moved = verify_pair(alpha.transformed(rot, shift), beta.transformed(rot, shift), cmap, TOL)
        assert moved.mu == pytest.approx(report3.mu, abs=1e-9)
        assert {k: v.passed for k, v in moved.verdicts.items()} == {
            k: v.passed for k, v in report3.verdicts.items()
        }
        for name in ("alignment", "distance", "cos_theta"):
            assert moved.statistics[name]["max"] == pytest.approx(report3.statistics[name]["max"], abs=1e-9)

    def test_self_pair_fails(self, mannheim3_curve):
        cmap = CorrespondenceMap(s=mannheim3_curve.s_grid, s_star=mannheim3_curve.s_grid)
        report = verify_pair_3d(mannheim3_curve, mannheim3_curve, cmap, TOL)
        assert report.mu is None
        assert not report.verdicts["normal_binormal_alignment"].passed
        assert not report.verdicts["partner_ode"].passed
        assert not asserted_pass(report)

    def test_forced_offset_of_a_non_mannheim_curve(self):
        alpha = curve_of(non_mannheim3_document(samples=1501))
        beta, cmap = construct_partner_3d(alpha, 2.0)
        report = verify_pair_3d(alpha, beta, cmap, TOL)
        assert not report.verdicts["normal_binormal_alignment"].passed
        assert report.verdicts["normal_binormal_alignment"].statistic >= 1e-3

    def test_half_map_is_a_gap(self, mannheim3_pair):
        alpha, beta, cmap = mannheim3_pair
        half = cmap.size // 2
        with pytest.raises(CorrespondenceGap):
            verify_pair_3d(alpha, beta, CorrespondenceMap(s=cmap.s[:half], s_star=cmap.s_star[:half]), TOL)

    def test_mixed_dimensions(self, mannheim3_curve, mannheim4_curve):
        cmap = CorrespondenceMap(s=mannheim3_curve.s_grid, s_star=mannheim3_curve.s_grid)
        with pytest.raises(UnsupportedKind):
            verify_pair(mannheim3_curve, mannheim4_curve, cmap, TOL)


class TestConverse:
    def test_offset_along_partner_binormal_recovers_the_curve(self, mannheim3_pair, report3):
        alpha, beta, cmap = mannheim3_pair
        rebuilt, back = construct_mannheim_from_partner_3d(beta, report3.mu)
        s_of_star = CubicSpline(cmap.s_star, cmap.s)
        original = CubicSpline(alpha.s_grid, alpha.points, axis=0)(s_of_star(back.s_star))
        recovered = CubicSpline(rebuilt.s_grid, rebuilt.points, axis=0)(back.s)
        assert np.max(np.linalg.norm(recovered - original, axis=1)) <= 1e-5

    def test_zero_mu(self, mannheim3_pair):
        with pytest.raises(ZeroMu):
            construct_mannheim_from_partner_3d(mannheim3_pair[1], 0.0)


class TestPartnerOde:
    def test_exact_solution(self):
        # r* = tan(c s)/mu solves dr*/ds* = (k*/mu)(1 + mu^2 r*^2) with k* = c
        s = np.linspace(0.0, 10.0, 1001)
        profile = synthetic_profile(s, {"k": np.full_like(s, 0.05), "r": np.tan(0.05 * s) / 2.0}, 3)
        residual = partner_ode_residual_3d(profile, 2.0)
        assert np.all(np.isnan(residual[:2])) and np.all(np.isnan(residual[-2:]))
        assert np.nanmax(np.abs(residual)) <= 1e-8

    def test_wrong_offset(self):
        s = np.linspace(0.0, 10.0, 1001)
        profile = synthetic_profile(s, {"k": np.full_like(s, 0.05), "r": np.tan(0.05 * s) / 2.0}, 3)
        assert np.nanmax(np.abs(partner_ode_residual_3d(profile, 1.0))) > 0.01

    def test_errors(self):
        s = np.linspace(0.0, 1.0, 4)
        small = synthetic_profile(s, {"k": np.ones(4), "r": np.ones(4)}, 3)
        with pytest.raises(ZeroMu):
            partner_ode_residual_3d(small, 0.0)
        with pytest.raises(TooFewSamples):
            partner_ode_residual_3d(small, 1.0)
        flat = synthetic_profile(s, {"K": np.ones(4), "k": np.ones(4), "bitorsion": np.ones(4)}, 4)
        with pytest.raises(UnsupportedKind):
            partner_ode_residual_3d(flat, 1.0)


class TestPair4:
    def test_asserted_verdicts_pass(self, report4):
        assert asserted_pass(report4)

    def test_normal_in_binormal_plane(self, report4):
        assert np.max(values(report4.leakage)) <= 1e-5
        unit = values(report4.g) ** 2 + values(report4.h) ** 2
        assert np.max(np.abs(unit - 1.0)) <= 1e-6

    def test_distance_and_lambda(self, report4):
        assert np.mean(values(report4.distance_profile)) == pytest.approx(2.0, abs=1e-6)
        assert report4.lam == pytest.approx(2.0, abs=1e-6)

    def test_psi_prime(self, report4):
        root = math.sqrt(0.2)
        for column in (report4.psi_prime_measured, report4.psi_prime_general, report4.psi_prime_mannheim):
            assert np.max(np.abs(values(column) - root)) <= 1e-5
        assert np.max(np.abs(values(report4.identity_residual))) <= 1e-5

    def test_identity_on_prescribed_curvatures(self):
        s = np.linspace(0.0, 1.0, 5)
        profile = synthetic_profile(s, {"K": np.full(5, 0.4), "k": np.full(5, 0.2), "bitorsion": np.zeros(5)}, 4)
        assert np.max(np.abs(psi_prime_identity_residual(profile, 2.0))) <= 1e-15
        assert psi_prime_identity_residual(profile, 1.0)[0] == pytest.approx(-0.2)

    def test_self_pair_fails(self, mannheim4_curve):
        cmap = CorrespondenceMap(s=mannheim4_curve.s_grid, s_star=mannheim4_curve.s_grid)
        report = verify_pair_4d(mannheim4_curve, mannheim4_curve, cmap, TOL)
        assert not report.verdicts["normal_in_binormal_plane"].passed
        assert not report.verdicts["constant_distance"].passed

    def test_non_mannheim_offset_leaks(self):
        alpha = curve_of(varying4_document(samples=2001))
        beta, cmap = construct_partner_4d(alpha, 2.0)
        report = verify_pair_4d(alpha, beta, cmap, TOL)
        assert np.max(values(report.leakage)) >= 1e-2
        assert not report.verdicts["normal_in_binormal_plane"].passed


class TestCorrespondenceMap:
    def test_must_increase(self):
        with pytest.raises(ValidationError):
            CorrespondenceMap(s=np.array([0.0, 1.0, 1.0]), s_star=np.array([0.0, 1.0, 2.0]))
        with pytest.raises(ValidationError):
            CorrespondenceMap(s=np.array([0.0, 1.0]), s_star=np.array([0.0]))

    def test_inverse(self):
        cmap = CorrespondenceMap(s=np.array([0.0, 1.0, 2.0]), s_star=np.array([0.0, 0.5, 3.0]))
        back = cmap.inverse()
        assert np.array_equal(back.s, cmap.s_star)
        assert np.array_equal(back.inverse().s_star, cmap.s_star)
