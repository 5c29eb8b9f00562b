from __future__ import annotations

import logging
from pathlib import Path
from typing import List

import numpy as np

from project.api.exceptions import UnsupportedKind
from project.api.models.curve import FromCurvatures
from project.api.models.mannheim import Verdict
from project.api.schemas import ReportDocument, RunConfig
from project.api.utils import nan_stats
from project.api.v1.curve.controllers import sample_curve
from project.api.v1.frame.controllers import curvature_profile, grid_info
from project.storage import load_spec, read_document, write_curve, write_json
from .schemas import RoundTrip


def round_trip(spec, curve, profile) -> RoundTrip:
    prescribed = spec.curve.profile.evaluate(profile.s_grid)
    max_error, rms_error = {}, {}
    for name in profile.names:
        stats = nan_stats(profile[name] - prescribed[name])
        max_error[name] = stats["max"]
        rms_error[name] = stats["rms"]
    finite = [v for v in max_error.values() if np.isfinite(v)]
    return RoundTrip(
        max_error=max_error,
        rms_error=rms_error,
        worst=max(finite) if finite else None,
        length=curve.length,
        samples=curve.size,
    )


def cmd_synthesize(config: RunConfig) -> List[Path]:
    spec = load_spec(config.input)
    if not isinstance(spec.curve, FromCurvatures):
        raise UnsupportedKind(f"synthesize needs a from_curvatures spec, got {spec.curve.kind}")
    curve = sample_curve(spec)
    profile = curvature_profile(curve)
    echo = round_trip(spec, curve, profile)
    logging.info("synthesized %dD curve, round-trip error %s", spec.dimension, echo.worst)
    report = ReportDocument(
        command="synthesize",
        spec=read_document(config.input),
        grid=grid_info(curve, profile).model_dump(),
        verdicts={
            "round_trip": Verdict(
                passed=echo.worst is not None and echo.worst <= config.tol,
                statistic=echo.worst,
                tolerance=config.tol,
            )
        },
        result=echo.model_dump(),
    )
    out = config.output_dir
    return [
        *write_curve(out, "curve", curve, config.format),
        write_json(out / "synthesize.json", report),
    ]
