from __future__ import annotations

from typing import List

from pydantic import BaseModel, Field

_VECTORS = {3: ("t", "n", "b"), 4: ("T", "N", "B1", "B2")}


def frame_columns(dimension: int) -> List[str]:
    """s, position, frame vectors by component, then curvatures."""
    axes = ["x", "y", "z", "w"][:dimension]
    columns = ["s"] + axes
    for name in _VECTORS[dimension]:
        columns += [f"{name}{axis}" for axis in axes]
    return columns + (["k", "r"] if dimension == 3 else ["K", "k", "bitorsion"])


class GridInfo(BaseModel):
    samples: int
    step: float
    length: float
    stride: int = Field(..., description="Stencil step in samples")
    interior: int = Field(..., description="Rows with a full stencil")
    first_index: int
