from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class PartnerSummary(BaseModel):
    lam: float = Field(..., serialization_alias="lambda")
    length: float = Field(..., description="Arc length of the partner")
    samples: int
    speed_min: float = Field(..., description="min ds*/ds along the correspondence")
    speed_max: float

    model_config = ConfigDict(populate_by_name=True)
