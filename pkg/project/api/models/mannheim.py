from __future__ import annotations

from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Verdict(BaseModel):
    """One pass/fail judgement and the tolerance it was judged against."""

    passed: bool
    statistic: Optional[float] = Field(default=None, description="Value compared against the tolerance")
    tolerance: float
    asserted: bool = Field(default=True, description="False when the check is reported but not asserted")


class MannheimEstimate(BaseModel):
    """Pointwise lambda of k = lambda (k^2 + r^2) (E^3) or K = lambda (K^2 + k^2) (E^4)."""

    lam: Optional[float] = Field(default=None, serialization_alias="lambda")
    residual_max: Optional[float] = None
    residual_rms: Optional[float] = None
    verdict: bool
    tolerance: float
    per_sample: List[Optional[float]] = Field(default_factory=list)
    s_grid: List[float] = Field(default_factory=list)

    model_config = ConfigDict(populate_by_name=True)


class CorrespondenceMap(BaseModel):
    """Pairs (s, s_star) realizing phi(alpha(s)) = beta(psi(s))."""

    s: np.ndarray
    s_star: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def strictly_increasing(self):
        s = np.array(self.s, dtype=float)
        t = np.array(self.s_star, dtype=float)
        if s.shape != t.shape or s.ndim != 1:
            raise ValueError("s and s_star must be 1-D arrays of equal length")
        if s.size < 2:
            raise ValueError("a correspondence needs at least two pairs")
        if np.any(np.diff(s) <= 0) or np.any(np.diff(t) <= 0):
            raise ValueError("correspondence must be strictly increasing in both columns")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "s_star", t)
        return self

    @property
    def size(self) -> int:
        return int(self.s.shape[0])

    def inverse(self) -> "CorrespondenceMap":
        return CorrespondenceMap(s=self.s_star, s_star=self.s)


class PairReport3(BaseModel):
    """Mannheim pair checks in E^3 on one correspondence grid."""

    s: List[float]
    s_star: List[float]
    alignment: List[Optional[float]] = Field(..., description="|h(n(s), b*(s*))|")
    distance_profile: List[Optional[float]]
    cos_theta_profile: List[Optional[float]]
    mu: Optional[float]
    partner_ode_residual: List[Optional[float]]
    theta_rate_residual: List[Optional[float]] = Field(..., description="dtheta/ds* + k*")
    offset_torsion_residual: List[Optional[float]] = Field(..., description="mu r* + tan(theta)")
    speed_ratio_residual: List[Optional[float]] = Field(..., description="ds/ds* - 1/cos(theta)")
    coverage: Dict[str, float]
    statistics: Dict[str, Dict[str, Optional[float]]]
    verdicts: Dict[str, Verdict]


class PairReport4(BaseModel):
    """Generalized Mannheim pair checks in E^4 on one correspondence grid."""

    s: List[float]
    s_star: List[float]
    distance_profile: List[Optional[float]]
    lam: Optional[float] = Field(default=None, serialization_alias="lambda")
    g: List[Optional[float]] = Field(..., description="h(N, B1bar)")
    h: List[Optional[float]] = Field(..., description="h(N, B2bar)")
    leakage: List[Optional[float]] = Field(..., description="sqrt(h(N,Tbar)^2 + h(N,Nbar)^2)")
    psi_prime_measured: List[Optional[float]]
    psi_prime_general: List[Optional[float]] = Field(..., description="sqrt((1-lam K)^2 + (lam k)^2)")
    psi_prime_mannheim: List[Optional[float]] = Field(..., description="sqrt(1 - lam K)")
    identity_residual: List[Optional[float]] = Field(..., description="(1-lam K)^2 + (lam k)^2 - (1 - lam K)")
    coverage: Dict[str, float]
    statistics: Dict[str, Dict[str, Optional[float]]]
    verdicts: Dict[str, Verdict]

    model_config = ConfigDict(populate_by_name=True)

    @field_validator("g", "h", "leakage")
    @classmethod
    def same_length(cls, v, info):
        s = info.data.get("s")
        if s is not None and len(v) != len(s):
            raise ValueError("profiles must share the correspondence grid")
        return v
