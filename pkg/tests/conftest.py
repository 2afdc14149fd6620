import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gluespace import kernels
from gluespace.comparison import Curvature
from gluespace.model import BoundaryArc, ComplexSpec, GluingClass, Piece

SCENES = os.path.join(os.path.dirname(__file__), "..", "scenes")

UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation outside any timed test section."""
    w = np.array([[0.0, 1.0], [1.0, 0.0]])
    wh = np.array([[0, 1], [1, 0]], dtype=np.int64)
    b = np.array([[0.5, np.inf]])
    bh = np.array([[1, kernels.HOP_INF]], dtype=np.int64)
    kernels.minplus_product(b, bh, w, wh)
    kernels.floyd_warshall(w.copy(), wh.copy())
    kernels.combine_pairs(b, bh, b, np.zeros_like(bh), np.zeros(1, np.int64), np.zeros(1, np.int64))


def scene_path(name):
    return os.path.join(SCENES, name)


def make_pillowcase(kappa=0.0):
    pieces = [Piece("sq1", "polygon2d", UNIT_SQUARE), Piece("sq2", "polygon2d", UNIT_SQUARE)]
    arcs, classes = [], []
    for i, name in enumerate(["b", "r", "t", "l"]):
        arcs.append(BoundaryArc(f"{name}1", "sq1", ("sides", (i,))))
        arcs.append(BoundaryArc(f"{name}2", "sq2", ("sides", (i,))))
        classes.append(GluingClass(f"g{name}", ((f"{name}1", 1), (f"{name}2", 1))))
    return ComplexSpec(pieces, arcs, classes, Curvature(kappa))


def make_papercup():
    return ComplexSpec(
        [Piece("sq", "polygon2d", UNIT_SQUARE)],
        [BoundaryArc("rim", "sq", ("sides", (0, 1)))],
        [GluingClass("f", (("rim", 1),), self_fold=True)],
        Curvature(0.0),
    )


def make_torn_envelope():
    return ComplexSpec(
        [Piece("rect", "polygon2d", [(0, 0), (2, 0), (2, 1), (0, 1)])],
        [BoundaryArc("tear", "rect", ("subside", 0, 0.5, 1.5))],
        [GluingClass("g", (("tear", 1),), self_fold=True)],
        Curvature(0.0),
    )


def make_annulus():
    return ComplexSpec(
        [Piece("sq", "polygon2d", UNIT_SQUARE)],
        [BoundaryArc("r", "sq", ("sides", (1,))), BoundaryArc("l", "sq", ("sides", (3,)))],
        [GluingClass("g", (("r", 1), ("l", -1)))],
        Curvature(0.0),
    )


@pytest.fixture(scope="session")
def pillowcase():
    return make_pillowcase()


@pytest.fixture(scope="session")
def papercup():
    return make_papercup()


@pytest.fixture(scope="session")
def torn_envelope():
    return make_torn_envelope()
