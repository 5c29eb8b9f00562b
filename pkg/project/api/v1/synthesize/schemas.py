from __future__ import annotations

from typing import Dict, Optional

from pydantic import BaseModel, Field


class RoundTrip(BaseModel):
    """Prescribed curvatures against those re-extracted from the synthesized samples."""

    max_error: Dict[str, Optional[float]] = Field(..., description="max |extracted - prescribed| per curvature")
    rms_error: Dict[str, Optional[float]]
    worst: Optional[float] = Field(default=None, description="Largest entry of max_error")
    length: float
    samples: int
