from __future__ import annotations

from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
from scipy.interpolate import PchipInterpolator
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from project.api.exceptions import NonPositiveCurvature
from project.config import settings


# ---------- curvature descriptors ----------
class ConstantCurvature(BaseModel):
    kind: Literal["constant"] = "constant"
    value: float

    def __call__(self, s: np.ndarray, base: Optional[np.ndarray] = None) -> np.ndarray:
        return np.full_like(np.asarray(s, dtype=float), self.value)


class TableCurvature(BaseModel):
    """Knots (s, value), linearly interpolated, held constant past the ends."""

    kind: Literal["table"] = "table"
    knots: List[Tuple[float, float]] = Field(..., min_length=2)

    @field_validator("knots")
    @classmethod
    def knots_increasing(cls, v):
        s = [k[0] for k in v]
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ValueError("knots must be strictly increasing in s")
        return v

    def __call__(self, s: np.ndarray, base: Optional[np.ndarray] = None) -> np.ndarray:
        xs = np.array([k[0] for k in self.knots], dtype=float)
        ys = np.array([k[1] for k in self.knots], dtype=float)
        return np.interp(np.asarray(s, dtype=float), xs, ys)


class MannheimCurvature(BaseModel):
    """Curvature derived from its predecessor so that c1 = lam (c1^2 + c2^2).

    Used for the torsion r in E^3 (derived from k) or for k in E^4 (derived
    from K): c2 = sign * sqrt(c1/lam - c1^2).
    """

    kind: Literal["mannheim"] = "mannheim"
    lam: float = Field(..., gt=0)
    sign: Literal[1, -1] = 1

    def __call__(self, s: np.ndarray, base: Optional[np.ndarray] = None) -> np.ndarray:
        if base is None:
            raise ValueError("mannheim descriptor needs the curvature it is derived from")
        base = np.asarray(base, dtype=float)
        radicand = base / self.lam - base ** 2
        if np.any(radicand < -1e-15):
            i = int(np.argmin(radicand))
            raise NonPositiveCurvature(
                f"curvature {base[i]:.6g} exceeds 1/lambda = {1.0 / self.lam:.6g}", sample=i
            )
        return self.sign * np.sqrt(np.clip(radicand, 0.0, None))


CurvatureFunction = Annotated[
    Union[ConstantCurvature, TableCurvature, MannheimCurvature], Field(discriminator="kind")
]


class CurvatureSpec(BaseModel):
    """Curvature functions along arc length.

    dimension 3: k(s) > 0 and torsion r(s).
    dimension 4: K(s) > 0, k(s) > 0 and bitorsion(s) (the r - K of the Frenet system).
    """

    dimension: Literal[3, 4]
    K: Optional[CurvatureFunction] = None
    k: CurvatureFunction
    r: Optional[CurvatureFunction] = None
    bitorsion: Optional[CurvatureFunction] = None

    @model_validator(mode="after")
    def fields_match_dimension(self):
        if self.dimension == 3:
            if self.r is None:
                raise ValueError("3D curvature spec needs k and r")
            if isinstance(self.k, MannheimCurvature):
                raise ValueError("k cannot be derived in 3D; use it for r")
        else:
            if self.K is None or self.bitorsion is None:
                raise ValueError("4D curvature spec needs K, k and bitorsion")
            if isinstance(self.K, MannheimCurvature) or isinstance(self.bitorsion, MannheimCurvature):
                raise ValueError("only k can be derived in 4D")
        return self

    def evaluate(self, s) -> dict:
        """Curvature arrays at arc lengths `s`; raises NonPositiveCurvature."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.dimension == 3:
            k = self.k(s)
            _require_positive("k", k, s)
            return {"k": k, "r": self.r(s, base=k)}
        big_k = self.K(s)
        _require_positive("K", big_k, s)
        k = self.k(s, base=big_k)
        _require_positive("k", k, s)
        return {"K": big_k, "k": k, "bitorsion": self.bitorsion(s)}

    def check_positive(self, length: float) -> None:
        """Positivity at every knot and on a fine grid of [0, length]."""
        grid = np.linspace(0.0, length, 257)
        knot_s = []
        for fn in (self.K, self.k):
            if isinstance(fn, TableCurvature):
                knot_s.extend(x for x, _ in fn.knots)
        self.evaluate(np.concatenate([grid, np.array(knot_s, dtype=float)]))


def _require_positive(name: str, values: np.ndarray, s: np.ndarray) -> None:
    bad = np.flatnonzero(~(values > 0.0))
    if bad.size:
        i = int(bad[0])
        raise NonPositiveCurvature(f"{name} = {values[i]:.6g} must be positive", s=float(s[i]))


# ---------- curve kinds ----------
class Helix3(BaseModel):
    """(a cos t, a sin t, b t)."""

    kind: Literal["helix3"] = "helix3"
    a: float = Field(..., gt=0)
    b: float


class Circle3(BaseModel):
    """(R cos t, R sin t, 0)."""

    kind: Literal["circle3"] = "circle3"
    R: float = Field(..., gt=0)


class Clifford4(BaseModel):
    """(a cos t, a sin t, b cos wt, b sin wt)."""

    kind: Literal["clifford4"] = "clifford4"
    a: float = Field(..., gt=0)
    b: float = Field(..., gt=0)
    omega: float = Field(..., gt=0)

    @field_validator("omega")
    @classmethod
    def omega_not_one(cls, v):
        if v == 1.0:
            raise ValueError("omega = 1 gives a planar circle with degenerate higher frame vectors")
        return v


class Sampled(BaseModel):
    """Raw samples; `csv` is resolved by the storage layer into points/params."""

    kind: Literal["sampled"] = "sampled"
    points: List[List[float]] = Field(default_factory=list)
    params: List[float] = Field(default_factory=list)
    csv: Optional[str] = None

    @model_validator(mode="after")
    def params_increasing(self):
        if not self.points and self.csv is not None:
            return self
        if len(self.points) != len(self.params):
            raise ValueError("points and params must have the same length")
        if len(self.params) < 4:
            raise ValueError("a sampled curve needs at least 4 points")
        if any(b <= a for a, b in zip(self.params, self.params[1:])):
            raise ValueError("params must be strictly increasing")
        return self


class FromCurvatures(BaseModel):
    kind: Literal["from_curvatures"] = "from_curvatures"
    profile: CurvatureSpec
    frame0: Optional[List[List[float]]] = Field(default=None, description="Seed frame rows; defaults to the standard basis")
    origin: Optional[List[float]] = Field(default=None, description="Start point; defaults to the origin")


CurveKind = Annotated[
    Union[Helix3, Circle3, Clifford4, Sampled, FromCurvatures], Field(discriminator="kind")
]

_KIND_DIMENSION = {"helix3": 3, "circle3": 3, "clifford4": 4}


class CurveSpec(BaseModel):
    """Curve-spec document: {"dimension", "curve": {"kind", ...}, "domain": [t0, t1], "samples": n}."""

    dimension: Literal[3, 4]
    curve: CurveKind
    domain: Tuple[float, float]
    samples: int = Field(..., ge=9)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "dimension": 3,
                "curve": {"kind": "helix3", "a": 2.0, "b": 1.0},
                "domain": [0.0, 6.283185307179586],
                "samples": 1001,
            }
        }
    )

    @field_validator("samples")
    @classmethod
    def samples_odd(cls, v):
        if v % 2 == 0:
            raise ValueError("samples must be odd")
        return v

    @model_validator(mode="after")
    def consistent(self):
        t0, t1 = self.domain
        if not t0 < t1:
            raise ValueError("domain must satisfy t0 < t1")
        expected = _KIND_DIMENSION.get(self.curve.kind)
        if expected is not None and expected != self.dimension:
            raise ValueError(f"{self.curve.kind} lives in dimension {expected}")
        if isinstance(self.curve, Sampled) and self.curve.points:
            if any(len(p) != self.dimension for p in self.curve.points):
                raise ValueError("sampled points must match the dimension")
            if t0 < self.curve.params[0] or t1 > self.curve.params[-1]:
                raise ValueError("domain must lie inside the sampled params")
        if isinstance(self.curve, FromCurvatures) and self.curve.profile.dimension != self.dimension:
            raise ValueError("curvature profile dimension mismatch")
        return self

    @property
    def step(self) -> float:
        t0, t1 = self.domain
        return (t1 - t0) / (self.samples - 1)


class SampledCurve(BaseModel):
    """Arc-length gridded curve in E^3 or E^4.

    `points` is an (n, dimension) array in quaternion component order (a, b, c[, d]).
    """

    dimension: Literal[3, 4]
    s_grid: np.ndarray
    points: np.ndarray
    step: float = Field(..., gt=0)

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def unit_speed_certificate(self):
        s = np.array(self.s_grid, dtype=float)
        p = np.array(self.points, dtype=float)
        if p.ndim != 2 or p.shape[1] != self.dimension or p.shape[0] != s.shape[0]:
            raise ValueError("points must be (n, dimension) and match s_grid")
        if s.shape[0] < 2:
            raise ValueError("a sampled curve needs at least two samples")
        diffs = np.diff(s)
        scale = max(1.0, float(np.max(np.abs(s))))
        if np.max(np.abs(diffs - self.step)) > 1e-12 * scale:
            raise ValueError("s_grid must be uniform with spacing `step`")
        chord = np.sqrt(np.sum(np.diff(p, axis=0) ** 2, axis=1)) / self.step
        eps = settings.ARC_EPS
        if np.any(chord < 1.0 - eps) or np.any(chord > 1.0 + eps):
            i = int(np.argmax(np.abs(chord - 1.0)))
            raise ValueError(f"unit-speed certificate fails at sample {i}: chord speed {chord[i]:.6g}")
        s.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "s_grid", s)
        object.__setattr__(self, "points", p)
        return self

    @property
    def size(self) -> int:
        return int(self.s_grid.shape[0])

    @property
    def length(self) -> float:
        return float(self.s_grid[-1] - self.s_grid[0])

    def transformed(self, rotation: np.ndarray, translation: Optional[np.ndarray] = None) -> "SampledCurve":
        """Rigid motion p -> R p + t applied to every sample."""
        moved = self.points @ np.asarray(rotation, dtype=float).T
        if translation is not None:
            moved = moved + np.asarray(translation, dtype=float)
        return SampledCurve(dimension=self.dimension, s_grid=np.array(self.s_grid), points=moved, step=self.step)


def uniform_grid(s0: float, length: float, n: int) -> Tuple[np.ndarray, float]:
    step = length / (n - 1)
    return s0 + step * np.arange(n, dtype=float), step


class ArcLengthTable(BaseModel):
    """Monotone map t -> s(t) on the spec's sample grid, s(t0) = 0."""

    t: np.ndarray
    s: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def strictly_increasing(self):
        if np.any(np.diff(self.s) <= 0.0):
            raise ValueError("arc-length table must be strictly increasing")
        return self

    @property
    def total(self) -> float:
        return float(self.s[-1])

    def s_at(self, t) -> np.ndarray:
        return PchipInterpolator(self.t, self.s)(np.asarray(t, dtype=float))

    def t_at(self, s) -> np.ndarray:
        return PchipInterpolator(self.s, self.t)(np.asarray(s, dtype=float))
