from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline

from project.api.exceptions import (
    BoundaryIndex,
    DegenerateCurvature,
    OutOfDomain,
    TooFewSamples,
    UnsupportedKind,
)
from project.api.models.curve import SampledCurve
from project.api.models.frenet import CurvatureProfile, FrenetFrame3, FrenetFrame4, complete_frame4
from project.api.schemas import ReportDocument, RunConfig
from project.api.utils import gram_schmidt, h_rows, row_norms, stencil_weights
from project.api.v1.curve.controllers import sample_curve
from project.config import settings
from project.storage import load_spec, read_document, write_json, write_table
from .schemas import GridInfo, frame_columns


def stencil_stride(curve: SampledCurve) -> int:
    """Stencil step in samples, so that stride*ds approximates FD_STEP.

    Capped so that a curve of at least 9 samples keeps a non-empty interior.
    """
    stride = int(round(settings.FD_STEP / curve.step))
    return max(1, min(stride, (curve.size - 1) // 6))


def interior_bounds(curve: SampledCurve) -> Tuple[int, int]:
    """Half-open index range where the widest (7-point) stencil fits."""
    trim = 3 * stencil_stride(curve)
    return trim, curve.size - trim


def _derivatives(curve: SampledCurve, idx: np.ndarray, orders) -> dict:
    stride = stencil_stride(curve)
    h = stride * curve.step
    out = {}
    for order in orders:
        offsets, weights, power = stencil_weights(order)
        acc = np.zeros((idx.shape[0], curve.dimension))
        for off, w in zip(offsets, weights):
            if w != 0.0:
                acc += w * curve.points[idx + off * stride]
        out[order] = acc / h ** power
    return out


def _frames3(d: dict):
    t = d[1] / row_norms(d[1])[:, None]
    v2 = d[2] - h_rows(d[2], t)[:, None] * t
    k = row_norms(v2)
    ok = k >= settings.KAPPA_MIN
    safe_k = np.where(ok, k, 1.0)
    n = v2 / safe_k[:, None]
    b = np.cross(t, n)
    # n' = (alpha''' - k' n)/k follows from alpha'' = k n
    k_prime = h_rows(d[3], n)
    n_prime = (d[3] - k_prime[:, None] * n) / safe_k[:, None]
    r = h_rows(n_prime, b)
    frames = np.stack([t, n, b], axis=1)
    causes = np.where(ok, "", "|alpha''| below kappa_min")
    return frames, {"k": k, "r": r}, ok, causes


def _frames4(d: dict):
    t = d[1] / row_norms(d[1])[:, None]
    v2 = d[2] - h_rows(d[2], t)[:, None] * t
    big_k = row_norms(v2)
    ok2 = big_k >= settings.KAPPA_MIN
    n = v2 / np.where(ok2, big_k, 1.0)[:, None]
    v3 = d[3] - h_rows(d[3], t)[:, None] * t - h_rows(d[3], n)[:, None] * n
    norm3 = row_norms(v3)
    ok3 = norm3 >= settings.KAPPA_MIN
    ok = ok2 & ok3
    b1 = v3 / np.where(ok3, norm3, 1.0)[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        b2 = complete_frame4(t, n, b1)
    safe_big_k = np.where(ok, big_k, 1.0)
    # N' = (alpha''' - K' N)/K, and h(N' + K T, B1) = h(alpha''', B1)/K
    big_k_prime = h_rows(d[3], n)
    n_prime = (d[3] - big_k_prime[:, None] * n) / safe_big_k[:, None]
    k = h_rows(n_prime + big_k[:, None] * t, b1)
    # the B2 part of alpha'''' is K k B1'; h(B1' + k N, B2) = h(alpha'''', B2)/(K k)
    safe_k = np.where(ok & (k > 0.0), k, 1.0)
    bitorsion = h_rows(d[4], b2) / (safe_big_k * safe_k)
    frames = np.stack([t, n, b1, b2], axis=1)
    causes = np.where(ok2, np.where(ok3, "", "alpha''' residual below kappa_min"), "|alpha''| below kappa_min")
    return frames, {"K": big_k, "k": k, "bitorsion": bitorsion}, ok, causes


def _check_index(curve: SampledCurve, i: int) -> None:
    lo, hi = interior_bounds(curve)
    if not lo <= i < hi:
        raise BoundaryIndex(f"index must lie in the stencil interior [{lo}, {hi})", sample=i)


def frame_3d(curve: SampledCurve, i: int) -> FrenetFrame3:
    if curve.dimension != 3:
        raise UnsupportedKind("frame_3d needs a 3D curve")
    _check_index(curve, i)
    idx = np.array([i])
    frames, curv, ok, causes = _frames3(_derivatives(curve, idx, (1, 2, 3)))
    if not ok[0]:
        raise DegenerateCurvature(str(causes[0]), sample=i, s=float(curve.s_grid[i]))
    return FrenetFrame3.from_matrix(frames[0], k=float(curv["k"][0]), r=float(curv["r"][0]), s=float(curve.s_grid[i]))


def frame_4d(curve: SampledCurve, i: int) -> FrenetFrame4:
    if curve.dimension != 4:
        raise UnsupportedKind("frame_4d needs a 4D curve")
    _check_index(curve, i)
    idx = np.array([i])
    frames, curv, ok, causes = _frames4(_derivatives(curve, idx, (1, 2, 3, 4)))
    if not ok[0]:
        raise DegenerateCurvature(str(causes[0]), sample=i, s=float(curve.s_grid[i]))
    return FrenetFrame4.from_matrix(
        frames[0], K=float(curv["K"][0]), k=float(curv["k"][0]),
        bitorsion=float(curv["bitorsion"][0]), s=float(curve.s_grid[i]),
    )


def curvature_profile(curve: SampledCurve) -> CurvatureProfile:
    """Frames and curvatures on every interior sample; failures become gaps."""
    if curve.size < 9:
        raise TooFewSamples(f"need at least 9 samples, got {curve.size}")
    lo, hi = interior_bounds(curve)
    idx = np.arange(lo, hi)
    if curve.dimension == 3:
        frames, curv, ok, causes = _frames3(_derivatives(curve, idx, (1, 2, 3)))
    else:
        frames, curv, ok, causes = _frames4(_derivatives(curve, idx, (1, 2, 3, 4)))
    gaps = np.flatnonzero(~ok)
    frames[gaps] = np.nan
    for name in curv:
        curv[name] = np.where(ok, curv[name], np.nan)
    if gaps.size:
        logging.warning("curvature profile: %d of %d interior samples degenerate", gaps.size, idx.size)
    return CurvatureProfile(
        dimension=curve.dimension,
        s_grid=np.array(curve.s_grid[lo:hi]),
        indices=idx,
        frames=frames,
        curvatures=curv,
        gaps=[int(g) for g in gaps],
        gap_causes=[str(causes[g]) for g in gaps],
        stride=stencil_stride(curve),
        step=curve.step,
    )


def require_regular(profile: CurvatureProfile) -> None:
    """Raise DegenerateCurvature naming the first gap, if any."""
    if profile.gaps:
        j = profile.gaps[0]
        raise DegenerateCurvature(
            profile.gap_causes[0], sample=int(profile.indices[j]), s=float(profile.s_grid[j])
        )


def frames_at(profile: CurvatureProfile, s_values) -> Tuple[np.ndarray, dict]:
    """Frames and curvatures at arbitrary interior arc lengths.

    Cubic interpolation of the profile, then per-sample re-orthonormalization.
    """
    s_values = np.asarray(s_values, dtype=float)
    mask = profile.valid_mask()
    s_ok = profile.s_grid[mask]
    if s_ok.size < 4:
        j = profile.gaps[0] if profile.gaps else 0
        cause = profile.gap_causes[0] if profile.gaps else "no regular samples"
        raise DegenerateCurvature(
            f"too few regular samples to interpolate frames ({cause})",
            sample=int(profile.indices[j]), s=float(profile.s_grid[j]),
        )
    slack = 1e-9 * max(1.0, float(np.max(np.abs(s_ok))))
    if np.any(s_values < s_ok[0] - slack) or np.any(s_values > s_ok[-1] + slack):
        raise OutOfDomain(f"arc lengths must lie in [{s_ok[0]:.6g}, {s_ok[-1]:.6g}]")
    dim = profile.dimension
    flat = profile.frames[mask].reshape(s_ok.size, dim * dim)
    raw = CubicSpline(s_ok, flat, axis=0)(s_values).reshape(-1, dim, dim)
    frames = np.stack([gram_schmidt(f) for f in raw])
    curv = {
        name: CubicSpline(s_ok, profile[name][mask])(s_values) for name in profile.names
    }
    return frames, curv


def grid_info(curve: SampledCurve, profile: CurvatureProfile) -> GridInfo:
    return GridInfo(
        samples=curve.size,
        step=curve.step,
        length=curve.length,
        stride=profile.stride,
        interior=profile.size,
        first_index=int(profile.indices[0]),
    )


def frame_table(curve: SampledCurve, profile: CurvatureProfile) -> pd.DataFrame:
    dim = curve.dimension
    data = np.column_stack([
        profile.s_grid,
        curve.points[profile.indices],
        profile.frames.reshape(profile.size, dim * dim),
        np.column_stack([profile[name] for name in profile.names]),
    ])
    return pd.DataFrame(data, columns=frame_columns(dim))


def cmd_frame(config: RunConfig) -> List[Path]:
    spec = load_spec(config.input)
    curve = sample_curve(spec)
    profile = curvature_profile(curve)
    require_regular(profile)
    table = frame_table(curve, profile)
    if config.format == "json":
        report = ReportDocument(
            command="frame",
            spec=read_document(config.input),
            grid=grid_info(curve, profile).model_dump(),
            result=table.to_dict(orient="list"),
        )
        return [write_json(config.output_dir / "frame.json", report)]
    return [write_table(config.output_dir / "frame.csv", table)]
