from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from project.api.exceptions import EmptyProfile, UnsupportedKind
from project.api.models.frenet import CurvatureProfile
from project.api.models.mannheim import MannheimEstimate, Verdict
from project.api.schemas import ReportDocument, RunConfig
from project.api.utils import json_floats
from project.api.v1.curve.controllers import sample_curve
from project.api.v1.frame.controllers import curvature_profile, grid_info, require_regular
from project.storage import load_spec, read_document, write_json


def _estimate(first: np.ndarray, second: np.ndarray, s_grid: np.ndarray, tol: float) -> MannheimEstimate:
    """Fit c1 = lam (c1^2 + c2^2) by the pointwise mean of c1/(c1^2 + c2^2)."""
    ok = np.isfinite(first) & np.isfinite(second)
    if not np.any(ok):
        raise EmptyProfile("no regular samples to estimate lambda from")
    energy = first ** 2 + second ** 2
    per_sample = np.full(first.shape, np.nan)
    per_sample[ok] = first[ok] / energy[ok]
    lam = float(np.mean(per_sample[ok]))
    residual = np.abs(first[ok] - lam * energy[ok])
    residual_max = float(np.max(residual))
    residual_rms = float(np.sqrt(np.mean(residual ** 2)))
    verdict = residual_max <= tol
    logging.info("lambda estimate %.10g, residual max %.3e (tol %.1e)", lam, residual_max, tol)
    return MannheimEstimate(
        lam=lam,
        residual_max=residual_max,
        residual_rms=residual_rms,
        verdict=verdict,
        tolerance=tol,
        per_sample=json_floats(per_sample),
        s_grid=[float(s) for s in s_grid],
    )


def mannheim_lambda_3d(profile: CurvatureProfile, tol: float) -> MannheimEstimate:
    """k = lam (k^2 + r^2) holds for a constant lam iff the curve is a Mannheim curve."""
    if profile.dimension != 3:
        raise UnsupportedKind("expected a 3D curvature profile")
    if profile.size == 0:
        raise EmptyProfile("curvature profile is empty")
    return _estimate(profile["k"], profile["r"], profile.s_grid, tol)


def mannheim_lambda_4d(profile: CurvatureProfile, tol: float) -> MannheimEstimate:
    """K = lam (K^2 + k^2); the bitorsion does not enter."""
    if profile.dimension != 4:
        raise UnsupportedKind("expected a 4D curvature profile")
    if profile.size == 0:
        raise EmptyProfile("curvature profile is empty")
    return _estimate(profile["K"], profile["k"], profile.s_grid, tol)


def mannheim_lambda(profile: CurvatureProfile, tol: float) -> MannheimEstimate:
    if profile.dimension == 3:
        return mannheim_lambda_3d(profile, tol)
    return mannheim_lambda_4d(profile, tol)


def cmd_check(config: RunConfig) -> Path:
    spec = load_spec(config.input)
    curve = sample_curve(spec)
    profile = curvature_profile(curve)
    require_regular(profile)
    estimate = mannheim_lambda(profile, config.tol)
    report = ReportDocument(
        command="check",
        spec=read_document(config.input),
        grid=grid_info(curve, profile).model_dump(),
        estimates={"lambda": estimate.lam},
        verdicts={
            "lambda_characterization": Verdict(
                passed=estimate.verdict, statistic=estimate.residual_max, tolerance=config.tol
            )
        },
        result=estimate.model_dump(by_alias=True),
    )
    return write_json(config.output_dir / "check.json", report)
