import json
import math

import numpy as np
import pytest

from project.api.models.curve import CurveSpec
from project.api.v1.curve.controllers import sample_curve
from project.api.v1.partner.controllers import construct_partner_3d, construct_partner_4d

TWO_PI = 2.0 * math.pi


def helix_document(a=2.0, b=1.0, samples=1001):
    return {"dimension": 3, "curve": {"kind": "helix3", "a": a, "b": b}, "domain": [0.0, TWO_PI], "samples": samples}


def circle_document(R=2.0, samples=1001):
    return {"dimension": 3, "curve": {"kind": "circle3", "R": R}, "domain": [0.0, TWO_PI], "samples": samples}


def mannheim3_document(samples=3001, length=15.0):
    """k falls linearly 0.45 -> 0.3 and r is derived so that k = 2 (k^2 + r^2)."""
    return {
        "dimension": 3,
        "curve": {
            "kind": "from_curvatures",
            "profile": {
                "dimension": 3,
                "k": {"kind": "table", "knots": [[0.0, 0.45], [length, 0.3]]},
                "r": {"kind": "mannheim", "lam": 2.0, "sign": 1},
            },
            "origin": [-1.5, -2.0, -3.0],
        },
        "domain": [0.0, length],
        "samples": samples,
    }


def non_mannheim3_document(samples=3001, length=15.0):
    return {
        "dimension": 3,
        "curve": {
            "kind": "from_curvatures",
            "profile": {
                "dimension": 3,
                "k": {"kind": "constant", "value": 0.4},
                "r": {"kind": "table", "knots": [[0.0, 0.1], [length, 0.5]]},
            },
        },
        "domain": [0.0, length],
        "samples": samples,
    }


def constant4_document(K=0.4, k=0.2, bitorsion=0.3, samples=4001, length=20.0):
    return {
        "dimension": 4,
        "curve": {
            "kind": "from_curvatures",
            "profile": {
                "dimension": 4,
                "K": {"kind": "constant", "value": K},
                "k": {"kind": "constant", "value": k},
                "bitorsion": {"kind": "constant", "value": bitorsion},
            },
        },
        "domain": [0.0, length],
        "samples": samples,
    }


def varying4_document(samples=4001, length=20.0):
    """K constant, k from a knot table: fails K = lam (K^2 + k^2)."""
    doc = constant4_document(samples=samples, length=length)
    doc["curve"]["profile"]["k"] = {"kind": "table", "knots": [[0.0, 0.1], [length, 0.3]]}
    return doc


def write_spec(directory, name, document):
    path = directory / name
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def rotation(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    x, y, z = axis
    cross = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + math.sin(angle) * cross + (1.0 - math.cos(angle)) * cross @ cross


@pytest.fixture(scope="session")
def helix_curve():
    return sample_curve(CurveSpec.model_validate(helix_document(samples=10001)))


@pytest.fixture(scope="session")
def mannheim3_curve():
    return sample_curve(CurveSpec.model_validate(mannheim3_document()))


@pytest.fixture(scope="session")
def mannheim3_pair(mannheim3_curve):
    beta, cmap = construct_partner_3d(mannheim3_curve, 2.0)
    return mannheim3_curve, beta, cmap


@pytest.fixture(scope="session")
def mannheim4_curve():
    return sample_curve(CurveSpec.model_validate(constant4_document()))


@pytest.fixture(scope="session")
def mannheim4_pair(mannheim4_curve):
    beta, cmap = construct_partner_4d(mannheim4_curve, 2.0)
    return mannheim4_curve, beta, cmap
