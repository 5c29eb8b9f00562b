from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from project.api.models.mannheim import Verdict
from project.config import settings


class RunConfig(BaseModel):
    """One CLI invocation."""

    command: Literal["frame", "check", "partner", "verify", "synthesize"]
    input: Path
    output_dir: Path
    input2: Optional[Path] = None
    map: Optional[Path] = Field(default=None, description="Correspondence CSV with header s,s_star")
    tol: float = Field(default_factory=lambda: settings.DEFAULT_TOL, gt=0)
    lam: Optional[float] = Field(default=None, alias="lambda")
    format: Literal["csv", "json"] = "csv"

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    @model_validator(mode="after")
    def command_arguments(self):
        if self.command == "partner" and self.lam is None:
            raise ValueError("partner needs --lambda")
        if self.command == "frame" and self.lam is not None:
            raise ValueError("frame does not take --lambda")
        if self.command == "verify" and (self.input2 is None or self.map is None):
            raise ValueError("verify needs --input2 and --map")
        return self


class ReportDocument(BaseModel):
    """JSON report written by every command. Carries no timestamps."""

    tool_version: str = Field(default_factory=lambda: settings.TOOL_VERSION)
    command: str
    spec: Dict[str, Any] = Field(..., description="Echo of the input spec document(s)")
    grid: Dict[str, Any] = Field(default_factory=dict)
    estimates: Dict[str, Optional[float]] = Field(default_factory=dict)
    verdicts: Dict[str, Verdict] = Field(default_factory=dict)
    result: Dict[str, Any] = Field(default_factory=dict)
