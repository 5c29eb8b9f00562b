from __future__ import annotations

import math
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from project.config import settings


class Quaternion(BaseModel):
    """Real quaternion q = a e1 + b e2 + c e3 + d e4 with e4 = 1.

    The scalar part is stored last (S_q = d, V_q = a e1 + b e2 + c e3), so the
    component order of `to_array()` is (a, b, c, d). Multiplication follows

        e1^2 = e2^2 = e3^2 = -1
        e1 e2 = e3,  e2 e3 = e1,  e3 e1 = e2
        e2 e1 = -e3, e3 e2 = -e1, e1 e3 = -e2

    Values are immutable; NaN/Inf propagate without validation.
    """

    a: float = Field(default=0.0, description="Coefficient of e1")
    b: float = Field(default=0.0, description="Coefficient of e2")
    c: float = Field(default=0.0, description="Coefficient of e3")
    d: float = Field(default=0.0, description="Coefficient of e4 = 1 (scalar part)")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"a": 1.0, "b": 0.0, "c": -1.0, "d": 2.0}},
    )

    @property
    def scalar(self) -> float:
        return self.d

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=float)

    def to_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        v = np.asarray(arr, dtype=float).ravel()
        if v.size == 3:
            return cls(a=float(v[0]), b=float(v[1]), c=float(v[2]), d=0.0)
        return cls(a=float(v[0]), b=float(v[1]), c=float(v[2]), d=float(v[3]))

    @classmethod
    def from_parts(cls, scalar: float, vector) -> "Quaternion":
        v = np.asarray(vector, dtype=float)
        return cls(a=float(v[0]), b=float(v[1]), c=float(v[2]), d=float(scalar))

    # ---------- operators ----------
    def __add__(self, other: "QuaternionLike") -> "Quaternion":
        o = as_quaternion(other)
        return Quaternion(a=self.a + o.a, b=self.b + o.b, c=self.c + o.c, d=self.d + o.d)

    def __sub__(self, other: "QuaternionLike") -> "Quaternion":
        o = as_quaternion(other)
        return Quaternion(a=self.a - o.a, b=self.b - o.b, c=self.c - o.c, d=self.d - o.d)

    def __neg__(self) -> "Quaternion":
        return Quaternion(a=-self.a, b=-self.b, c=-self.c, d=-self.d)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(a=self.a * other, b=self.b * other, c=self.c * other, d=self.d * other)
        return quat_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return NotImplemented


class SpatialQuaternion(BaseModel):
    """Quaternion with identically zero scalar part; the model of E^3."""

    a: float = Field(default=0.0, description="Coefficient of e1")
    b: float = Field(default=0.0, description="Coefficient of e2")
    c: float = Field(default=0.0, description="Coefficient of e3")

    model_config = ConfigDict(frozen=True)

    def as_quaternion(self) -> Quaternion:
        return Quaternion(a=self.a, b=self.b, c=self.c, d=0.0)

    def to_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "SpatialQuaternion":
        v = np.asarray(arr, dtype=float).ravel()
        return cls(a=float(v[0]), b=float(v[1]), c=float(v[2]))


QuaternionLike = Union[Quaternion, SpatialQuaternion]


def as_quaternion(q: QuaternionLike) -> Quaternion:
    if isinstance(q, SpatialQuaternion):
        return q.as_quaternion()
    return q


def quat_mul(p: QuaternionLike, q: QuaternionLike) -> Quaternion:
    """p x q = SpSq - <Vp,Vq> + Sp Vq + Sq Vp + Vp ^ Vq."""
    p = as_quaternion(p)
    q = as_quaternion(q)
    return Quaternion(
        a=p.d * q.a + q.d * p.a + (p.b * q.c - p.c * q.b),
        b=p.d * q.b + q.d * p.b + (p.c * q.a - p.a * q.c),
        c=p.d * q.c + q.d * p.c + (p.a * q.b - p.b * q.a),
        d=p.d * q.d - (p.a * q.a + p.b * q.b + p.c * q.c),
    )


def quat_conj(q: QuaternionLike) -> Quaternion:
    """Hamiltonian conjugation gamma: negates the vector part."""
    q = as_quaternion(q)
    return Quaternion(a=-q.a, b=-q.b, c=-q.c, d=q.d)


def h_form(p: QuaternionLike, q: QuaternionLike, literal: bool = True) -> float:
    """Symmetric bilinear form h(p, q) = 1/2 [p x gamma q + q x gamma p].

    The literal path forms both products and checks that the vector part
    vanishes before returning the scalar part.
    """
    p = as_quaternion(p)
    q = as_quaternion(q)
    if not literal:
        return p.a * q.a + p.b * q.b + p.c * q.c + p.d * q.d
    total = quat_mul(p, quat_conj(q)) + quat_mul(q, quat_conj(p))
    half = total * 0.5
    scale = max(1.0, quat_norm(p) * quat_norm(q))
    leak = float(np.max(np.abs(half.vector)))
    if leak > settings.SPATIAL_TOL * scale:
        raise ArithmeticError(f"h-form vector part {leak:.3e} exceeds tolerance")
    return half.d


def quat_norm(q: QuaternionLike) -> float:
    """||q|| = sqrt(scalar part of q x gamma q)."""
    q = as_quaternion(q)
    return math.sqrt(quat_mul(q, quat_conj(q)).d)


def is_spatial(q: QuaternionLike, tol: float = 0.0) -> bool:
    """True iff ||q + gamma q|| <= tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    q = as_quaternion(q)
    return quat_norm(q + quat_conj(q)) <= tol


E1 = Quaternion(a=1.0)
E2 = Quaternion(b=1.0)
E3 = Quaternion(c=1.0)
E4 = Quaternion(d=1.0)
BASIS = (E1, E2, E3, E4)
