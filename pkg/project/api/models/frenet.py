from __future__ import annotations

from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from project.api.models.quaternion import Quaternion, SpatialQuaternion
from project.api.utils import cross4, gram_deviation


class FrenetFrame3(BaseModel):
    """Frame {t, n, b} with principal curvature k > 0 and torsion r at arc length s."""

    t: SpatialQuaternion
    n: SpatialQuaternion
    b: SpatialQuaternion
    k: float = Field(..., gt=0)
    r: float
    s: float

    model_config = ConfigDict(frozen=True)

    def matrix(self) -> np.ndarray:
        return np.stack([self.t.to_array(), self.n.to_array(), self.b.to_array()])

    def orthonormality_error(self) -> float:
        return gram_deviation(self.matrix())

    def handedness_error(self) -> float:
        return float(np.max(np.abs(np.cross(self.t.to_array(), self.n.to_array()) - self.b.to_array())))

    @classmethod
    def from_matrix(cls, rows: np.ndarray, k: float = 1.0, r: float = 0.0, s: float = 0.0) -> "FrenetFrame3":
        rows = np.asarray(rows, dtype=float)
        return cls(
            t=SpatialQuaternion.from_array(rows[0]),
            n=SpatialQuaternion.from_array(rows[1]),
            b=SpatialQuaternion.from_array(rows[2]),
            k=k, r=r, s=s,
        )


class FrenetFrame4(BaseModel):
    """Frame {T, N, B1, B2} with K > 0, k > 0 and bitorsion (the r - K) at arc length s."""

    T: Quaternion
    N: Quaternion
    B1: Quaternion
    B2: Quaternion
    K: float = Field(..., gt=0)
    k: float = Field(..., gt=0)
    bitorsion: float
    s: float

    model_config = ConfigDict(frozen=True)

    def matrix(self) -> np.ndarray:
        return np.stack([self.T.to_array(), self.N.to_array(), self.B1.to_array(), self.B2.to_array()])

    def orthonormality_error(self) -> float:
        return gram_deviation(self.matrix())

    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix()))

    @classmethod
    def from_matrix(cls, rows: np.ndarray, K: float = 1.0, k: float = 1.0, bitorsion: float = 0.0, s: float = 0.0) -> "FrenetFrame4":
        rows = np.asarray(rows, dtype=float)
        return cls(
            T=Quaternion.from_array(rows[0]),
            N=Quaternion.from_array(rows[1]),
            B1=Quaternion.from_array(rows[2]),
            B2=Quaternion.from_array(rows[3]),
            K=K, k=k, bitorsion=bitorsion, s=s,
        )


class CurvatureProfile(BaseModel):
    """Frames and curvatures over the stencil interior of a SampledCurve.

    `frames` is (m, dim, dim) with rows {t, n, b} or {T, N, B1, B2}; samples
    where extraction failed are NaN and listed in `gaps` (interior positions).
    `indices` are the source-curve sample indices of the interior.
    """

    dimension: Literal[3, 4]
    s_grid: np.ndarray
    indices: np.ndarray
    frames: np.ndarray
    curvatures: dict
    gaps: List[int] = Field(default_factory=list)
    gap_causes: List[str] = Field(default_factory=list)
    stride: int = 1
    step: float = 0.0

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def names(self) -> tuple:
        return ("k", "r") if self.dimension == 3 else ("K", "k", "bitorsion")

    @property
    def size(self) -> int:
        return int(self.s_grid.shape[0])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.curvatures[name]

    def valid_mask(self) -> np.ndarray:
        mask = np.ones(self.size, dtype=bool)
        mask[list(self.gaps)] = False
        return mask

    def frame(self, j: int):
        """FrenetFrame3/FrenetFrame4 at interior position j."""
        if j in self.gaps:
            return None
        rows = self.frames[j]
        if self.dimension == 3:
            return FrenetFrame3.from_matrix(rows, k=float(self["k"][j]), r=float(self["r"][j]), s=float(self.s_grid[j]))
        return FrenetFrame4.from_matrix(
            rows, K=float(self["K"][j]), k=float(self["k"][j]),
            bitorsion=float(self["bitorsion"][j]), s=float(self.s_grid[j]),
        )


def complete_frame4(t: np.ndarray, n: np.ndarray, b1: np.ndarray) -> np.ndarray:
    """Unit B2 making {T, N, B1, B2} positively oriented (row-wise)."""
    b2 = cross4(t, n, b1)
    return b2 / np.linalg.norm(b2, axis=1)[:, None]


def synthetic_profile(s_grid, curvatures: dict, dimension: int, frames: Optional[np.ndarray] = None) -> CurvatureProfile:
    """Profile built from prescribed curvature arrays (no frames unless given)."""
    s_grid = np.asarray(s_grid, dtype=float)
    m = s_grid.shape[0]
    if frames is None:
        frames = np.full((m, dimension, dimension), np.nan)
    return CurvatureProfile(
        dimension=dimension,
        s_grid=s_grid,
        indices=np.arange(m),
        frames=frames,
        curvatures={k: np.asarray(v, dtype=float) for k, v in curvatures.items()},
        step=float(s_grid[1] - s_grid[0]) if m > 1 else 0.0,
    )
