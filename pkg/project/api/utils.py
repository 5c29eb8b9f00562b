from __future__ import annotations

import math
from typing import Optional

import numpy as np

# Central stencils as (offsets, weights, power of h in the denominator)
_STENCILS = {
    1: (np.arange(-2, 3), np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0, 1),
    2: (np.arange(-2, 3), np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0, 2),
    3: (np.arange(-3, 4), np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0]) / 8.0, 3),
    4: (np.arange(-3, 4), np.array([-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0]) / 6.0, 4),
}


def stencil_half_width(order: int) -> int:
    return int(_STENCILS[order][0][-1])


def stencil_weights(order: int):
    return _STENCILS[order]


def central_derivative(values: np.ndarray, h: float, order: int, stride: int = 1, trim: Optional[int] = None) -> np.ndarray:
    """order-th derivative of equally spaced `values` (axis 0) by central stencil.

    The stencil step is `stride` samples, i.e. h_eff = stride*h. Output covers
    indices [trim, n - trim); trim defaults to the stencil half width times stride.
    """
    offsets, weights, power = _STENCILS[order]
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if trim is None:
        trim = int(offsets[-1]) * stride
    if trim < int(offsets[-1]) * stride or n - 2 * trim <= 0:
        raise ValueError("not enough samples for the requested stencil")
    h_eff = stride * h
    out = np.zeros((n - 2 * trim,) + values.shape[1:], dtype=float)
    # fixed accumulation order keeps results bitwise reproducible
    for off, w in zip(offsets, weights):
        if w == 0.0:
            continue
        lo = trim + off * stride
        out += w * values[lo:lo + n - 2 * trim]
    return out / h_eff ** power


def h_rows(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise h-form (Euclidean inner product) of two stacks of vectors."""
    return np.einsum("ij,ij->i", np.asarray(p, dtype=float), np.asarray(q, dtype=float))


def row_norms(p: np.ndarray) -> np.ndarray:
    return np.sqrt(h_rows(p, p))


def cross4(u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Row-wise ternary cross product in E^4.

    The result x satisfies det[u, v, w, x] = |x|^2 >= 0, so {u, v, w, x/|x|}
    is positively oriented whenever u, v, w are independent.
    """
    u = np.atleast_2d(u)
    v = np.atleast_2d(v)
    w = np.atleast_2d(w)
    m = np.stack([u, v, w], axis=1)  # (n, 3, 4)
    out = np.empty((m.shape[0], 4), dtype=float)
    for j in range(4):
        cols = [c for c in range(4) if c != j]
        out[:, j] = (-1.0) ** (j + 3) * np.linalg.det(m[:, :, cols])
    return out


def gram_schmidt(frame: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the rows of `frame`."""
    q = np.array(frame, dtype=float, copy=True)
    for i in range(q.shape[0]):
        for j in range(i):
            q[i] -= np.dot(q[j], q[i]) * q[j]
        q[i] /= np.linalg.norm(q[i])
    return q


def gram_deviation(frame: np.ndarray) -> float:
    """max |F F^T - I| for a square frame stored by rows."""
    f = np.asarray(frame, dtype=float)
    return float(np.max(np.abs(f @ f.T - np.eye(f.shape[0]))))


def nan_stats(values) -> dict:
    """max/mean/std/rms of the finite entries; NaN stats when nothing is finite."""
    arr = np.asarray(values, dtype=float)
    finite = arr[np.isfinite(arr)]
    if finite.size == 0:
        return {"max": math.nan, "mean": math.nan, "std": math.nan, "rms": math.nan, "count": 0}
    return {
        "max": float(np.max(np.abs(finite))),
        "mean": float(np.mean(finite)),
        "std": float(np.std(finite)),
        "rms": float(np.sqrt(np.mean(finite ** 2))),
        "count": int(finite.size),
    }


def json_float(v: Optional[float]) -> Optional[float]:
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def json_floats(values) -> list:
    return [json_float(v) for v in np.asarray(values, dtype=float).ravel()]
