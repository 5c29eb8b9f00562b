from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Tuple

import numpy as np

from project.api.exceptions import (
    DegeneratePartner,
    PartnerSpeedDomain,
    UnsupportedKind,
    ZeroMu,
    ZeroOffset,
)
from project.api.models.curve import SampledCurve
from project.api.models.frenet import CurvatureProfile
from project.api.models.mannheim import CorrespondenceMap
from project.api.schemas import ReportDocument, RunConfig
from project.api.v1.curve.controllers import resample_by_arclength, sample_curve
from project.api.v1.frame.controllers import curvature_profile, require_regular
from project.api.v1.verify.controllers import verify_pair
from project.config import settings
from project.storage import (
    load_spec,
    read_document,
    write_correspondence,
    write_curve,
    write_json,
)
from .schemas import PartnerSummary


def _regular_profile(curve: SampledCurve, dimension: int) -> CurvatureProfile:
    if curve.dimension != dimension:
        raise UnsupportedKind(f"expected a {dimension}D curve")
    profile = curvature_profile(curve)
    require_regular(profile)
    return profile


def _check_speed(speed: np.ndarray, profile: CurvatureProfile) -> None:
    slow = np.flatnonzero(speed < settings.PARTNER_SPEED_MIN)
    if slow.size:
        j = int(slow[0])
        raise DegeneratePartner(
            f"offset curve speed {speed[j]:.3e} below {settings.PARTNER_SPEED_MIN:g}",
            sample=int(profile.indices[j]),
            s=float(profile.s_grid[j]),
        )


def _offset(curve: SampledCurve, profile: CurvatureProfile, row: int, coefficient: float, speed: np.ndarray) -> Tuple[SampledCurve, CorrespondenceMap]:
    """curve + coefficient * frame[row] on the profile grid, resampled by its own arc length."""
    _check_speed(speed, profile)
    points = curve.points[profile.indices] + coefficient * profile.frames[:, row, :]
    offset, s_offset = resample_by_arclength(profile.s_grid, points, speed, profile.size, curve.dimension)
    return offset, CorrespondenceMap(s=profile.s_grid, s_star=s_offset)


def construct_partner_3d(alpha: SampledCurve, lam: float) -> Tuple[SampledCurve, CorrespondenceMap]:
    """beta = alpha + lam n, with |beta'| = sqrt((1 - lam k)^2 + (lam r)^2)."""
    if lam == 0.0:
        raise ZeroOffset("lambda = 0 makes the partner coincide with the curve")
    profile = _regular_profile(alpha, 3)
    k, r = profile["k"], profile["r"]
    speed = np.sqrt((1.0 - lam * k) ** 2 + (lam * r) ** 2)
    beta, cmap = _offset(alpha, profile, 1, lam, speed)
    logging.info("3D partner at lambda=%g: length %.6g over %d samples", lam, beta.length, beta.size)
    return beta, cmap


def construct_partner_4d(alpha: SampledCurve, lam: float) -> Tuple[SampledCurve, CorrespondenceMap]:
    """beta = alpha + lam N, with |beta'| = sqrt((1 - lam K)^2 + (lam k)^2); requires 1 - lam K > 0."""
    if lam == 0.0:
        raise ZeroOffset("lambda = 0 makes the partner coincide with the curve")
    profile = _regular_profile(alpha, 4)
    big_k, k = profile["K"], profile["k"]
    margin = 1.0 - lam * big_k
    bad = np.flatnonzero(~(margin > 0.0))
    if bad.size:
        j = int(bad[0])
        raise PartnerSpeedDomain(
            f"1 - lambda K = {margin[j]:.6g} must be positive",
            sample=int(profile.indices[j]),
            s=float(profile.s_grid[j]),
        )
    speed = np.sqrt(margin ** 2 + (lam * k) ** 2)
    beta, cmap = _offset(alpha, profile, 1, lam, speed)
    logging.info("4D partner at lambda=%g: length %.6g over %d samples", lam, beta.length, beta.size)
    return beta, cmap


def construct_mannheim_from_partner_3d(beta: SampledCurve, mu: float) -> Tuple[SampledCurve, CorrespondenceMap]:
    """alpha = beta + mu b*, with |alpha'| = sqrt(1 + (mu r*)^2).

    The map pairs the arc length of alpha (s) with that of beta (s_star).
    """
    if mu == 0.0:
        raise ZeroMu("mu = 0 makes the curve coincide with its partner")
    profile = _regular_profile(beta, 3)
    speed = np.sqrt(1.0 + (mu * profile["r"]) ** 2)
    alpha, back = _offset(beta, profile, 2, mu, speed)
    return alpha, back.inverse()


def construct_partner(alpha: SampledCurve, lam: float) -> Tuple[SampledCurve, CorrespondenceMap]:
    if alpha.dimension == 3:
        return construct_partner_3d(alpha, lam)
    return construct_partner_4d(alpha, lam)


def cmd_partner(config: RunConfig) -> List[Path]:
    spec = load_spec(config.input)
    alpha = sample_curve(spec)
    beta, cmap = construct_partner(alpha, config.lam)
    pair = verify_pair(alpha, beta, cmap, config.tol)
    rate = np.gradient(cmap.s_star, cmap.s)
    summary = PartnerSummary(
        lam=config.lam,
        length=beta.length,
        samples=beta.size,
        speed_min=float(np.min(rate)),
        speed_max=float(np.max(rate)),
    )
    estimates = {"lambda": config.lam}
    if beta.dimension == 3:
        estimates["mu"] = pair.mu
    else:
        estimates["lambda_measured"] = pair.lam
    report = ReportDocument(
        command="partner",
        spec=read_document(config.input),
        grid={"samples": alpha.size, "step": alpha.step, "pairs": cmap.size},
        estimates=estimates,
        verdicts=pair.verdicts,
        result={"partner": summary.model_dump(by_alias=True), "pair": pair.model_dump(by_alias=True)},
    )
    out = config.output_dir
    return [
        *write_curve(out, "partner", beta, config.format),
        write_correspondence(out / "correspondence.csv", cmap),
        write_json(out / "partner_report.json", report),
    ]
