from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from project.api.exceptions import SpecParseError
from project.api.models.curve import CurveSpec, SampledCurve
from project.api.models.mannheim import CorrespondenceMap
from project.config import settings

COORDINATES = {3: ["x", "y", "z"], 4: ["x", "y", "z", "w"]}


def read_document(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise SpecParseError(f"spec file not found: {path}")
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path.name}: malformed JSON ({exc.msg} at line {exc.lineno})")
    if not isinstance(doc, dict):
        raise SpecParseError(f"{path.name}: a spec document must be a JSON object")
    return doc


def read_sampled_csv(path: Union[str, Path], dimension: int) -> Tuple[list, list]:
    """(params, points) from a `t,x,y,z[,w]` CSV."""
    columns = ["t"] + COORDINATES[dimension]
    try:
        df = pd.read_csv(path, float_precision="round_trip")
    except FileNotFoundError:
        raise SpecParseError(f"sampled curve file not found: {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise SpecParseError(f"{Path(path).name}: {exc}")
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise SpecParseError(f"{Path(path).name}: missing columns {', '.join(missing)}")
    values = df[columns].to_numpy(dtype=float)
    if not np.all(np.isfinite(values)):
        raise SpecParseError(f"{Path(path).name}: non-finite values")
    return values[:, 0].tolist(), values[:, 1:].tolist()


def load_spec(path: Union[str, Path]) -> CurveSpec:
    """Parse a curve-spec document; a sampled `csv` is resolved next to the spec file."""
    path = Path(path)
    doc = read_document(path)
    curve = doc.get("curve")
    if isinstance(curve, dict) and curve.get("kind") == "sampled" and curve.get("csv") and not curve.get("points"):
        dimension = doc.get("dimension")
        if dimension not in (3, 4):
            raise SpecParseError(f"{path.name}: dimension must be 3 or 4")
        params, points = read_sampled_csv(path.parent / curve["csv"], dimension)
        doc = {**doc, "curve": {**curve, "params": params, "points": points}}
    try:
        spec = CurveSpec.model_validate(doc)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise SpecParseError(f"{path.name}: {where}: {first['msg']}")
    logging.debug("loaded %s spec from %s", spec.curve.kind, path)
    return spec


def sampled_spec_document(curve: SampledCurve, csv_name: Optional[str] = None) -> dict:
    """Spec document that re-ingests a written curve CSV, or carries the samples inline."""
    if csv_name is None:
        body = {"kind": "sampled", "params": curve.s_grid, "points": curve.points}
    else:
        body = {"kind": "sampled", "csv": csv_name}
    return {
        "dimension": curve.dimension,
        "curve": body,
        "domain": [float(curve.s_grid[0]), float(curve.s_grid[-1])],
        "samples": curve.size,
    }


def write_curve(directory: Path, stem: str, curve: SampledCurve, fmt: str = "csv") -> List[Path]:
    """Curve samples plus a spec document that re-ingests them.

    `csv` writes `<stem>.csv` and a spec referencing it; `json` inlines the
    samples into `<stem>_spec.json`.
    """
    if fmt == "json":
        return [write_json(directory / f"{stem}_spec.json", sampled_spec_document(curve))]
    csv_path = write_curve_csv(directory / f"{stem}.csv", curve)
    return [csv_path, write_json(directory / f"{stem}_spec.json", sampled_spec_document(curve, csv_path.name))]


def write_table(path: Path, df: pd.DataFrame) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=settings.CSV_FLOAT_FORMAT, lineterminator="\n")
    return path


def write_curve_csv(path: Path, curve: SampledCurve) -> Path:
    df = pd.DataFrame(curve.points, columns=COORDINATES[curve.dimension])
    df.insert(0, "t", curve.s_grid)
    return write_table(path, df)


def write_correspondence(path: Path, cmap: CorrespondenceMap) -> Path:
    return write_table(path, pd.DataFrame({"s": cmap.s, "s_star": cmap.s_star}))


def read_correspondence(path: Union[str, Path]) -> CorrespondenceMap:
    try:
        df = pd.read_csv(path, float_precision="round_trip")
    except FileNotFoundError:
        raise SpecParseError(f"correspondence file not found: {path}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise SpecParseError(f"{Path(path).name}: {exc}")
    if list(df.columns) != ["s", "s_star"]:
        raise SpecParseError(f"{Path(path).name}: header must be s,s_star")
    try:
        return CorrespondenceMap(s=df["s"].to_numpy(dtype=float), s_star=df["s_star"].to_numpy(dtype=float))
    except ValidationError as exc:
        raise SpecParseError(f"{Path(path).name}: {exc.errors()[0]['msg']}")


def _jsonable(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return _jsonable(value.model_dump(by_alias=True))
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def dumps(payload: Any) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: Path, payload: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload), encoding="utf-8")
    return path
