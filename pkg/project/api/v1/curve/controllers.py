from __future__ import annotations

import logging
from typing import Optional, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline, KroghInterpolator, PchipInterpolator

from project.api.exceptions import (
    DegenerateSpeed,
    NonOrthonormalSeed,
    OutOfDomain,
    TooFewSamples,
    UnsupportedKind,
)
from project.api.models.curve import (
    ArcLengthTable,
    Circle3,
    Clifford4,
    CurvatureSpec,
    CurveSpec,
    FromCurvatures,
    Helix3,
    SampledCurve,
    Sampled,
    uniform_grid,
)
from project.api.models.frenet import FrenetFrame3, FrenetFrame4
from project.api.utils import gram_deviation, gram_schmidt, stencil_half_width, stencil_weights
from project.config import settings

# (cos, sin) of t + m*pi/2, exact for every m
_QUARTER_TURNS = {
    0: lambda c, s: (c, s),
    1: lambda c, s: (-s, c),
    2: lambda c, s: (-c, -s),
    3: lambda c, s: (s, -c),
}


def _rotating(t: np.ndarray, order: int, omega: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(omega * t), np.sin(omega * t)
    x, y = _QUARTER_TURNS[order % 4](c, s)
    scale = omega ** order
    return scale * x, scale * y


def _analytic(spec: CurveSpec, t: np.ndarray, order: int) -> np.ndarray:
    curve = spec.curve
    if isinstance(curve, Helix3):
        x, y = _rotating(t, order)
        z = curve.b * t if order == 0 else (np.full_like(t, curve.b) if order == 1 else np.zeros_like(t))
        return np.stack([curve.a * x, curve.a * y, z], axis=-1)
    if isinstance(curve, Circle3):
        x, y = _rotating(t, order)
        return np.stack([curve.R * x, curve.R * y, np.zeros_like(t)], axis=-1)
    if isinstance(curve, Clifford4):
        x, y = _rotating(t, order)
        z, w = _rotating(t, order, curve.omega)
        return np.stack([curve.a * x, curve.a * y, curve.b * z, curve.b * w], axis=-1)
    raise UnsupportedKind(f"no closed form for kind {curve.kind}")


def _check_domain(spec: CurveSpec, t: np.ndarray, margin: float = 0.0) -> None:
    t0, t1 = spec.domain
    slack = 1e-12 * max(1.0, abs(t0), abs(t1))
    bad = (t < t0 + margin - slack) | (t > t1 - margin + slack)
    if np.any(bad):
        where = float(t[np.flatnonzero(bad)[0]])
        if margin > 0.0:
            raise OutOfDomain(f"t = {where:.6g} is closer than {margin:.6g} to the boundary of [{t0}, {t1}]")
        raise OutOfDomain(f"t = {where:.6g} outside [{t0}, {t1}]")


def _local_cubic(curve: Sampled, t: np.ndarray, der: int = 0) -> np.ndarray:
    """Cubic through the four samples nearest each t (value or derivative)."""
    params = np.asarray(curve.params, dtype=float)
    pts = np.asarray(curve.points, dtype=float)
    n = params.shape[0]
    starts = np.clip(np.searchsorted(params, t) - 2, 0, n - 4)
    out = np.empty((t.shape[0], pts.shape[1]), dtype=float)
    for start in np.unique(starts):
        sel = starts == start
        window = slice(start, start + 4)
        poly = KroghInterpolator(params[window], pts[window])
        out[sel] = poly.derivative(t[sel], der) if der else poly(t[sel])
    return out


def evaluate(spec: CurveSpec, t: Union[float, np.ndarray]) -> np.ndarray:
    """Position at parameter t (scalar -> (dim,), array -> (m, dim))."""
    scalar = np.ndim(t) == 0
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if isinstance(spec.curve, FromCurvatures):
        raise UnsupportedKind("synthesized curves are produced by synthesize_from_curvatures_*")
    _check_domain(spec, tt)
    if isinstance(spec.curve, Sampled):
        out = _local_cubic(spec.curve, tt)
    else:
        out = _analytic(spec, tt, 0)
    return out[0] if scalar else out


def derivative(spec: CurveSpec, t: Union[float, np.ndarray], order: int) -> np.ndarray:
    """order-th derivative in t; closed form for builtins, central stencils for samples."""
    if order not in (1, 2, 3, 4):
        raise ValueError("order must be 1..4")
    scalar = np.ndim(t) == 0
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if isinstance(spec.curve, FromCurvatures):
        raise UnsupportedKind("synthesized curves are produced by synthesize_from_curvatures_*")
    if not isinstance(spec.curve, Sampled):
        _check_domain(spec, tt)
        out = _analytic(spec, tt, order)
        return out[0] if scalar else out
    h = spec.step
    offsets, weights, power = stencil_weights(order)
    _check_domain(spec, tt, margin=stencil_half_width(order) * h)
    out = np.zeros((tt.shape[0], spec.dimension), dtype=float)
    for off, w in zip(offsets, weights):
        if w != 0.0:
            out += w * _local_cubic(spec.curve, tt + off * h)
    out /= h ** power
    return out[0] if scalar else out


def _speed(spec: CurveSpec, t: np.ndarray) -> np.ndarray:
    if isinstance(spec.curve, Sampled):
        d1 = _local_cubic(spec.curve, t, der=1)
    else:
        d1 = _analytic(spec, t, 1)
    return np.sqrt(np.sum(d1 ** 2, axis=1))


def arc_length_table(spec: CurveSpec) -> ArcLengthTable:
    """Composite Simpson quadrature of the speed over the sample grid."""
    if isinstance(spec.curve, FromCurvatures):
        raise UnsupportedKind("synthesized curves are already parametrized by arc length")
    t0, _ = spec.domain
    t = t0 + spec.step * np.arange(spec.samples, dtype=float)
    speed = _speed(spec, t)
    slow = np.flatnonzero(speed < settings.SPEED_MIN)
    if slow.size:
        i = int(slow[0])
        raise DegenerateSpeed(f"speed {speed[i]:.3e} below {settings.SPEED_MIN:g}", sample=i)
    s = cumulative_simpson(speed, x=t, initial=0.0)
    return ArcLengthTable(t=t, s=s)


def reparametrize_by_arclength(spec: CurveSpec, n: Optional[int] = None) -> SampledCurve:
    """n samples uniform in arc length; t(s) inverted by monotone cubic interpolation."""
    n = spec.samples if n is None else n
    if n < 9 or n % 2 == 0:
        raise TooFewSamples(f"need an odd sample count >= 9, got {n}")
    if isinstance(spec.curve, FromCurvatures):
        return sample_curve(spec.model_copy(update={"samples": n}))
    table = arc_length_table(spec)
    s_grid, step = uniform_grid(0.0, table.total, n)
    t_of_s = np.clip(table.t_at(s_grid), spec.domain[0], spec.domain[1])
    points = evaluate(spec, t_of_s)
    logging.info("reparametrized %s: length %.6g, %d samples", spec.curve.kind, table.total, n)
    return SampledCurve(dimension=spec.dimension, s_grid=s_grid, points=points, step=step)


def resample_by_arclength(s_source: np.ndarray, points: np.ndarray, speed: np.ndarray, n: int, dimension: int) -> Tuple[SampledCurve, np.ndarray]:
    """Unit-speed resampling of a curve known at `s_source` with speed |dx/ds|.

    Returns the resampled curve (arc length from 0) and the arc length
    s*(s_source) of every source sample.
    """
    s_star = cumulative_simpson(speed, x=s_source, initial=0.0)
    grid, step = uniform_grid(0.0, float(s_star[-1]), n)
    s_of_star = PchipInterpolator(s_star, s_source)(grid)
    positions = CubicSpline(s_source, points, axis=0)(s_of_star)
    curve = SampledCurve(dimension=dimension, s_grid=grid, points=positions, step=step)
    return curve, s_star


# ---------- synthesis ----------
def _seed_matrix(frame0: Union[FrenetFrame3, FrenetFrame4, None], dimension: int) -> np.ndarray:
    if frame0 is None:
        return np.eye(dimension)
    rows = frame0.matrix()
    if rows.shape != (dimension, dimension):
        raise NonOrthonormalSeed(f"seed frame must be {dimension}x{dimension}")
    dev = gram_deviation(rows)
    if dev > settings.ORTHONORMAL_TOL:
        raise NonOrthonormalSeed(f"seed frame deviates from orthonormal by {dev:.3e}")
    if np.linalg.det(rows) <= 0.0:
        raise NonOrthonormalSeed("seed frame must be positively oriented")
    return rows


def _generator(curvatures: dict, dimension: int, j: int) -> np.ndarray:
    """Antisymmetric Frenet matrix A with frame' = A frame."""
    if dimension == 3:
        k, r = curvatures["k"][j], curvatures["r"][j]
        return np.array([[0.0, k, 0.0], [-k, 0.0, r], [0.0, -r, 0.0]])
    big_k, k, bt = curvatures["K"][j], curvatures["k"][j], curvatures["bitorsion"][j]
    return np.array([
        [0.0, big_k, 0.0, 0.0],
        [-big_k, 0.0, k, 0.0],
        [0.0, -k, 0.0, bt],
        [0.0, 0.0, -bt, 0.0],
    ])


def integrate_frenet(profile: CurvatureSpec, seed: np.ndarray, length: float, n: int, origin: Optional[np.ndarray] = None):
    """Classical RK4 on x' = frame[0], frame' = A(s) frame with Gram-Schmidt after every step.

    Returns (points, frames, max pre-correction Gram deviation).
    """
    dimension = profile.dimension
    if n < 9:
        raise TooFewSamples(f"need at least 9 samples, got {n}")
    if not length > 0.0:
        raise OutOfDomain("length must be positive")
    profile.check_positive(length)
    h = length / (n - 1)
    half_grid = 0.5 * h * np.arange(2 * n - 1, dtype=float)
    curv = profile.evaluate(half_grid)

    x = np.zeros(dimension) if origin is None else np.asarray(origin, dtype=float).copy()
    frame = np.array(seed, dtype=float)
    points = np.empty((n, dimension))
    frames = np.empty((n, dimension, dimension))
    points[0], frames[0] = x, frame
    worst = 0.0
    for i in range(n - 1):
        a0 = _generator(curv, dimension, 2 * i)
        ah = _generator(curv, dimension, 2 * i + 1)
        a1 = _generator(curv, dimension, 2 * i + 2)
        k1 = a0 @ frame
        f2 = frame + 0.5 * h * k1
        k2 = ah @ f2
        f3 = frame + 0.5 * h * k2
        k3 = ah @ f3
        f4 = frame + h * k3
        k4 = a1 @ f4
        x = x + (h / 6.0) * (frame[0] + 2.0 * f2[0] + 2.0 * f3[0] + f4[0])
        frame = frame + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        worst = max(worst, gram_deviation(frame))
        frame = gram_schmidt(frame)
        points[i + 1], frames[i + 1] = x, frame
    logging.info("integrated %dD Frenet system: %d steps, max frame drift %.3e", dimension, n - 1, worst)
    return points, frames, worst


def _synthesize(profile: CurvatureSpec, frame0, length: float, n: int, dimension: int, origin=None) -> SampledCurve:
    if profile.dimension != dimension:
        raise UnsupportedKind(f"expected a {dimension}D curvature spec")
    seed = _seed_matrix(frame0, dimension)
    points, _, _ = integrate_frenet(profile, seed, length, n, origin)
    s_grid, step = uniform_grid(0.0, length, n)
    return SampledCurve(dimension=dimension, s_grid=s_grid, points=points, step=step)


def synthesize_from_curvatures_3d(profile: CurvatureSpec, frame0: Optional[FrenetFrame3], length: float, n: int, origin=None) -> SampledCurve:
    return _synthesize(profile, frame0, length, n, 3, origin)


def synthesize_from_curvatures_4d(profile: CurvatureSpec, frame0: Optional[FrenetFrame4], length: float, n: int, origin=None) -> SampledCurve:
    return _synthesize(profile, frame0, length, n, 4, origin)


def seed_frame(spec: CurveSpec):
    curve = spec.curve
    if not isinstance(curve, FromCurvatures) or curve.frame0 is None:
        return None
    rows = np.asarray(curve.frame0, dtype=float)
    if rows.shape != (spec.dimension, spec.dimension):
        raise NonOrthonormalSeed(f"frame0 must be {spec.dimension}x{spec.dimension}")
    if spec.dimension == 3:
        return FrenetFrame3.from_matrix(rows)
    return FrenetFrame4.from_matrix(rows)


def sample_curve(spec: CurveSpec) -> SampledCurve:
    """Unit-speed SampledCurve for any spec kind."""
    curve = spec.curve
    if isinstance(curve, FromCurvatures):
        t0, t1 = spec.domain
        synth = synthesize_from_curvatures_3d if spec.dimension == 3 else synthesize_from_curvatures_4d
        return synth(curve.profile, seed_frame(spec), t1 - t0, spec.samples, origin=curve.origin)
    return reparametrize_by_arclength(spec, spec.samples)
