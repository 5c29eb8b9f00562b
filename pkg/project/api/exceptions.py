from __future__ import annotations

from typing import Optional


class CurveException(Exception):
    """Base error of the toolkit. `exit_code` is what the CLI returns."""

    exit_code: int = 1

    def __init__(self, detail: str, sample: Optional[int] = None, s: Optional[float] = None):
        self.detail = detail
        self.sample = sample
        self.s = s
        super().__init__(self.__str__())

    def __str__(self) -> str:
        where = []
        if self.sample is not None:
            where.append(f"sample {self.sample}")
        if self.s is not None:
            where.append(f"s={self.s:.6g}")
        prefix = self.__class__.__name__
        if where:
            return f"{prefix} at {', '.join(where)}: {self.detail}"
        return f"{prefix}: {self.detail}"


# ---------- exit 2: input errors ----------
class InputError(CurveException):
    exit_code = 2


class SpecParseError(InputError):
    pass


class OutOfDomain(InputError):
    pass


class UnsupportedKind(InputError):
    pass


class TooFewSamples(InputError):
    pass


class EmptyProfile(InputError):
    pass


class ZeroMu(InputError):
    pass


class ZeroOffset(InputError):
    pass


class NonOrthonormalSeed(InputError):
    pass


class BoundaryIndex(InputError):
    pass


# ---------- exit 3: geometric degeneracy ----------
class GeometryError(CurveException):
    exit_code = 3


class DegenerateSpeed(GeometryError):
    pass


class DegenerateCurvature(GeometryError):
    pass


class NonPositiveCurvature(GeometryError):
    pass


class DegeneratePartner(GeometryError):
    pass


class PartnerSpeedDomain(GeometryError):
    pass


# ---------- exit 4: correspondence ----------
class CorrespondenceError(CurveException):
    exit_code = 4


class CorrespondenceGap(CorrespondenceError):
    pass
