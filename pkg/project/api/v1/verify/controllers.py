from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from project.api.exceptions import CorrespondenceGap, TooFewSamples, UnsupportedKind, ZeroMu
from project.api.models.curve import SampledCurve
from project.api.models.frenet import CurvatureProfile
from project.api.models.mannheim import CorrespondenceMap, PairReport3, PairReport4, Verdict
from project.api.schemas import ReportDocument, RunConfig
from project.api.utils import central_derivative, h_rows, json_floats, nan_stats, row_norms
from project.api.v1.curve.controllers import sample_curve
from project.api.v1.frame.controllers import curvature_profile, frames_at
from project.config import settings
from project.storage import load_spec, read_correspondence, read_document, write_json


def _series_stride(step: float) -> int:
    if not step > 0.0:
        return 1
    return max(1, int(round(settings.SERIES_FD_STEP / step)))


def _series_rate(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """dy/dx by central differences spanning SERIES_FD_STEP on each side; x may be non-uniform."""
    out = np.full(y.shape, np.nan)
    if y.size < 3:
        return out
    m = _series_stride(float(np.median(np.diff(x))))
    if y.size > 2 * m:
        out[m:-m] = (y[2 * m:] - y[:-2 * m]) / (x[2 * m:] - x[:-2 * m])
    return out


def partner_ode_residual_3d(profile: CurvatureProfile, mu: float) -> np.ndarray:
    """dr*/ds* - (k*/mu)(1 + mu^2 r*^2) on the profile grid; NaN where the stencil does not fit."""
    if mu == 0.0:
        raise ZeroMu("mu must be nonzero")
    if profile.dimension != 3:
        raise UnsupportedKind("expected a 3D curvature profile")
    stride = _series_stride(profile.step)
    if profile.size < 4 * stride + 1:
        raise TooFewSamples(f"need at least {4 * stride + 1} profile samples, got {profile.size}")
    k, r = profile["k"], profile["r"]
    dr = np.full(profile.size, np.nan)
    dr[2 * stride:profile.size - 2 * stride] = central_derivative(r, profile.step, 1, stride=stride)
    return dr - (k / mu) * (1.0 + mu ** 2 * r ** 2)


def _identity(big_k: np.ndarray, k: np.ndarray, lam: float) -> np.ndarray:
    margin = 1.0 - lam * big_k
    return margin ** 2 + (lam * k) ** 2 - margin


def psi_prime_identity_residual(profile: CurvatureProfile, lam: float) -> np.ndarray:
    """(1 - lam K)^2 + (lam k)^2 - (1 - lam K); zero wherever K = lam (K^2 + k^2)."""
    if profile.dimension != 4:
        raise UnsupportedKind("expected a 4D curvature profile")
    return _identity(profile["K"], profile["k"], lam)


def _positions(curve: SampledCurve, s: np.ndarray) -> np.ndarray:
    return CubicSpline(curve.s_grid, curve.points, axis=0)(s)


def _restrict(cmap: CorrespondenceMap, pa: CurvatureProfile, pb: CurvatureProfile) -> Tuple[np.ndarray, np.ndarray, dict]:
    """Pairs inside both interiors, and how much of each interior they span."""
    lo_a, hi_a = float(pa.s_grid[0]), float(pa.s_grid[-1])
    lo_b, hi_b = float(pb.s_grid[0]), float(pb.s_grid[-1])
    keep = (cmap.s >= lo_a) & (cmap.s <= hi_a) & (cmap.s_star >= lo_b) & (cmap.s_star <= hi_b)
    s, s_star = cmap.s[keep], cmap.s_star[keep]
    if s.size >= 2:
        coverage = {
            "alpha": float((s[-1] - s[0]) / (hi_a - lo_a)),
            "beta": float((s_star[-1] - s_star[0]) / (hi_b - lo_b)),
        }
    else:
        coverage = {"alpha": 0.0, "beta": 0.0}
    worst = min(coverage.values())
    if worst < settings.MIN_COVERAGE or s.size < 4:
        raise CorrespondenceGap(
            f"correspondence covers {worst:.1%} of an interior, {settings.MIN_COVERAGE:.0%} required"
        )
    return s, s_star, coverage


def _max_verdict(values: np.ndarray, tol: float, asserted: bool = True) -> Verdict:
    finite = np.abs(values[np.isfinite(values)])
    if finite.size == 0:
        return Verdict(passed=False, statistic=None, tolerance=tol, asserted=asserted)
    stat = float(np.max(finite))
    return Verdict(passed=stat <= tol, statistic=stat, tolerance=tol, asserted=asserted)


def _relative_spread(distance: np.ndarray, tol: float) -> Verdict:
    mean = float(np.mean(distance))
    if not mean > 0.0:
        return Verdict(passed=False, statistic=None, tolerance=tol)
    stat = float(np.std(distance)) / mean
    return Verdict(passed=stat <= tol, statistic=stat, tolerance=tol)


def _pair_setup(alpha: SampledCurve, beta: SampledCurve, cmap: CorrespondenceMap, dimension: int):
    if alpha.dimension != dimension or beta.dimension != dimension:
        raise UnsupportedKind(f"both curves must be {dimension}D")
    pa = curvature_profile(alpha)
    pb = curvature_profile(beta)
    s, s_star, coverage = _restrict(cmap, pa, pb)
    fa, ca = frames_at(pa, s)
    fb, cb = frames_at(pb, s_star)
    diff = _positions(alpha, s) - _positions(beta, s_star)
    return pb, s, s_star, coverage, fa, ca, fb, cb, diff


def verify_pair_3d(alpha: SampledCurve, beta: SampledCurve, cmap: CorrespondenceMap, tol: float) -> PairReport3:
    """Mannheim-pair checks for alpha (principal normals) against beta (binormals).

    The angle between t and t* is reported but not asserted: it moves with
    dtheta/ds* = -k* and is constant only when k* vanishes.
    """
    pb, s, s_star, coverage, fa, ca, fb, cb, diff = _pair_setup(alpha, beta, cmap, 3)
    t, n = fa[:, 0], fa[:, 1]
    t_star, n_star, b_star = fb[:, 0], fb[:, 1], fb[:, 2]

    alignment = np.abs(h_rows(n, b_star))
    distance = row_norms(diff)
    cos_theta = h_rows(t, t_star)
    theta = np.unwrap(np.arctan2(h_rows(t, n_star), cos_theta))

    mean_distance = float(np.mean(distance))
    mu: Optional[float] = None
    ode = np.full(s.size, np.nan)
    offset_torsion = np.full(s.size, np.nan)
    if mean_distance > settings.SPATIAL_TOL:
        # alpha = beta + mu b*
        mu = float(np.copysign(mean_distance, h_rows(diff, b_star)[0]))
        on_grid = partner_ode_residual_3d(pb, mu)
        finite = np.isfinite(on_grid)
        grid_ok = pb.s_grid[finite]
        ode = np.interp(s_star, grid_ok, on_grid[finite], left=np.nan, right=np.nan)

    guard = np.abs(cos_theta) >= settings.COS_THETA_GUARD
    tan_theta = np.where(guard, np.sin(theta) / np.where(guard, cos_theta, 1.0), np.nan)
    if mu is not None:
        offset_torsion = mu * cb["r"] + tan_theta
    theta_rate = _series_rate(theta, s_star) + cb["k"]
    ds_ds_star = np.gradient(s, s_star, edge_order=2)
    speed_ratio = np.where(guard, ds_ds_star - 1.0 / np.where(guard, cos_theta, 1.0), np.nan)

    cos_spread = float(np.std(cos_theta))
    verdicts = {
        "normal_binormal_alignment": _max_verdict(1.0 - alignment, tol),
        "constant_distance": _relative_spread(distance, tol),
        "constant_angle": Verdict(passed=cos_spread <= tol, statistic=cos_spread, tolerance=tol, asserted=False),
        "partner_ode": _max_verdict(ode, tol),
        "theta_rate": _max_verdict(theta_rate, tol),
        "offset_torsion": _max_verdict(offset_torsion, tol),
        "speed_ratio": _max_verdict(speed_ratio, tol),
    }
    if mu is None:
        for name in ("partner_ode", "offset_torsion"):
            verdicts[name] = Verdict(passed=False, statistic=None, tolerance=tol)
    logging.info(
        "3D pair: mu=%s, alignment min %.9f, distance spread %s",
        mu, float(np.min(alignment)), verdicts["constant_distance"].statistic,
    )
    return PairReport3(
        s=json_floats(s),
        s_star=json_floats(s_star),
        alignment=json_floats(alignment),
        distance_profile=json_floats(distance),
        cos_theta_profile=json_floats(cos_theta),
        mu=mu,
        partner_ode_residual=json_floats(ode),
        theta_rate_residual=json_floats(theta_rate),
        offset_torsion_residual=json_floats(offset_torsion),
        speed_ratio_residual=json_floats(speed_ratio),
        coverage=coverage,
        statistics={
            "alignment": nan_stats(alignment),
            "distance": nan_stats(distance),
            "cos_theta": nan_stats(cos_theta),
            "partner_ode": nan_stats(ode),
            "theta_rate": nan_stats(theta_rate),
            "offset_torsion": nan_stats(offset_torsion),
            "speed_ratio": nan_stats(speed_ratio),
        },
        verdicts=verdicts,
    )


def verify_pair_4d(alpha: SampledCurve, beta: SampledCurve, cmap: CorrespondenceMap, tol: float) -> PairReport4:
    """Generalized Mannheim checks: N of alpha in the {B1, B2} plane of beta at constant distance."""
    _, s, s_star, coverage, fa, ca, fb, cb, diff = _pair_setup(alpha, beta, cmap, 4)
    n = fa[:, 1]
    g = h_rows(n, fb[:, 2])
    h = h_rows(n, fb[:, 3])
    leakage = np.sqrt(h_rows(n, fb[:, 0]) ** 2 + h_rows(n, fb[:, 1]) ** 2)
    unit_defect = g ** 2 + h ** 2 + leakage ** 2 - 1.0
    distance = row_norms(diff)

    # beta = alpha + lam N
    lam = float(np.copysign(np.mean(distance), h_rows(-diff, n)[0]))
    big_k, k = ca["K"], ca["k"]
    margin = 1.0 - lam * big_k
    psi_measured = np.gradient(s_star, s, edge_order=2)
    psi_general = np.sqrt(margin ** 2 + (lam * k) ** 2)
    psi_mannheim = np.sqrt(np.where(margin >= 0.0, margin, np.nan))
    identity = _identity(big_k, k, lam)

    verdicts = {
        "normal_in_binormal_plane": _max_verdict(leakage, tol),
        "constant_distance": _relative_spread(distance, tol),
        "unit_normal": _max_verdict(unit_defect, 1e-6),
        "psi_prime": _max_verdict(psi_measured - psi_general, tol),
        "psi_prime_identity": _max_verdict(identity, tol),
    }
    logging.info("4D pair: lambda=%.10g, leakage max %.3e", lam, float(np.max(leakage)))
    return PairReport4(
        s=json_floats(s),
        s_star=json_floats(s_star),
        distance_profile=json_floats(distance),
        lam=lam,
        g=json_floats(g),
        h=json_floats(h),
        leakage=json_floats(leakage),
        psi_prime_measured=json_floats(psi_measured),
        psi_prime_general=json_floats(psi_general),
        psi_prime_mannheim=json_floats(psi_mannheim),
        identity_residual=json_floats(identity),
        coverage=coverage,
        statistics={
            "distance": nan_stats(distance),
            "leakage": nan_stats(leakage),
            "unit_normal": nan_stats(unit_defect),
            "psi_prime_measured": nan_stats(psi_measured),
            "psi_prime_general": nan_stats(psi_general),
            "identity": nan_stats(identity),
        },
        verdicts=verdicts,
    )


def verify_pair(alpha: SampledCurve, beta: SampledCurve, cmap: CorrespondenceMap, tol: float):
    if alpha.dimension != beta.dimension:
        raise UnsupportedKind("curves of a pair must share a dimension")
    if alpha.dimension == 3:
        return verify_pair_3d(alpha, beta, cmap, tol)
    return verify_pair_4d(alpha, beta, cmap, tol)


def cmd_verify(config: RunConfig) -> Path:
    alpha_spec = load_spec(config.input)
    beta_spec = load_spec(config.input2)
    if alpha_spec.dimension != beta_spec.dimension:
        raise UnsupportedKind("both specs must have the same dimension")
    cmap = read_correspondence(config.map)
    alpha = sample_curve(alpha_spec)
    beta = sample_curve(beta_spec)
    pair = verify_pair(alpha, beta, cmap, config.tol)
    if alpha.dimension == 3:
        estimates = {"mu": pair.mu}
    else:
        estimates = {"lambda": pair.lam}
    report = ReportDocument(
        command="verify",
        spec={"alpha": read_document(config.input), "beta": read_document(config.input2)},
        grid={"pairs": len(pair.s), "coverage_alpha": pair.coverage["alpha"], "coverage_beta": pair.coverage["beta"]},
        estimates=estimates,
        verdicts=pair.verdicts,
        result=pair.model_dump(by_alias=True),
    )
    return write_json(config.output_dir / "verify.json", report)
