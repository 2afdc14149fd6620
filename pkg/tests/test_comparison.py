"""Model-space trigonometry: frozen values and invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gluespace.comparison import (
    TriangleSides,
    comparison_angle,
    comparison_angle_batch,
    cone_distance,
    cs,
    d_kappa,
    model_side,
    rho,
    sn,
    tg,
)
from gluespace.errors import DomainError, NumericInconsistencyError

# integral of sn(-1, .) over [0, 1], computed by fine trapezoid quadrature
RHO_MINUS1_AT_1 = 0.5430806348152437


def quadrature_rho(kappa, t, n=200001):
    v = np.linspace(0.0, t, n)
    return float(np.trapezoid(sn(kappa, v), v))


def test_sn_closed_forms():
    assert sn(0, 2.5) == 2.5
    assert sn(1, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert sn(4, math.pi / 4) == pytest.approx(0.5, abs=1e-15)
    assert cs(0, 7.0) == 1.0
    assert cs(-1, 1.0) == pytest.approx(math.cosh(1.0), abs=1e-15)


def test_rho_against_quadrature_oracle():
    got = rho(-1, 1)
    assert got == pytest.approx(RHO_MINUS1_AT_1, abs=1e-12)
    assert got == pytest.approx(quadrature_rho(-1, 1.0), abs=1e-9)
    assert rho(0, 2.0) == 2.0
    assert rho(1, 1.0) == pytest.approx(quadrature_rho(1, 1.0), abs=1e-9)


def test_rho_domain():
    with pytest.raises(DomainError):
        rho(1, -0.5)


def test_tg_values_and_domain(monkeypatch):
    assert tg(0, 3.0) == 3.0
    assert tg(-1, 0.5) == pytest.approx(math.tanh(0.5), abs=1e-15)
    # cos of a representable float is never exactly zero, so inject one
    import gluespace.comparison as c

    monkeypatch.setattr(c, "cs", lambda k, t: np.zeros(3))
    with pytest.raises(DomainError):
        c.tg(1.0, np.array([0.1, 0.2, 0.3]))


def test_comparison_angle_examples():
    assert comparison_angle(0, (1, 1, 1)) == pytest.approx(math.pi / 3, abs=1e-12)
    assert comparison_angle(1, (1, 0, 1)) == 0.0
    p = math.pi / 2
    assert comparison_angle(1, (p, p, p)) == pytest.approx(p, abs=1e-12)
    # degenerate perimeter rule for kappa > 0
    assert comparison_angle(1, (1.8 * math.pi, 1.2 * math.pi, 1.2 * math.pi)) == 0.0


def test_triangle_sides_validation():
    TriangleSides(1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        TriangleSides(3.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        TriangleSides(-1.0, 1.0, 1.0)
    assert comparison_angle(0, TriangleSides(1, 1, 1)) == pytest.approx(math.pi / 3)


def test_cone_distance_examples():
    assert cone_distance(0, 3, math.pi / 2, 4) == pytest.approx(5.0, abs=1e-12)
    assert cone_distance(0, 1, math.pi, 1) == pytest.approx(2.0, abs=1e-12)
    assert cone_distance(0, 1, 2 * math.pi, 1) == pytest.approx(2.0, abs=1e-12)
    assert cone_distance(0, 1, 0.0, 3) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(DomainError):
        cone_distance(1, math.pi, 1.0, 0.1)


def test_model_side_examples():
    assert model_side(0, 1, 1, math.pi / 3) == pytest.approx(1.0, abs=1e-12)
    assert model_side(0, 3, 4, math.pi / 2) == pytest.approx(5.0, abs=1e-12)
    p = math.pi / 2
    assert model_side(1, p, p, p) == pytest.approx(p, abs=1e-12)
    with pytest.raises(DomainError):
        model_side(1, math.pi, 0.5, 1.0)


def test_clamp_guard_raises_past_epsilon():
    with pytest.raises(NumericInconsistencyError):
        comparison_angle_batch(0.0, np.array([2.2]), np.array([1.0]), np.array([1.0]))
    # clamp=True saturates instead
    out = comparison_angle_batch(0.0, np.array([2.2]), np.array([1.0]), np.array([1.0]), clamp=True)
    assert out[0] == pytest.approx(math.pi)


@settings(max_examples=200, deadline=None)
@given(
    kappa=st.sampled_from([-1.0, -0.3, 0.0, 0.5, 1.0]),
    b=st.floats(0.1, 1.5),
    c=st.floats(0.1, 1.5),
    alpha=st.floats(0.01, math.pi - 0.01),
)
def test_roundtrip_model_side_comparison_angle(kappa, b, c, alpha):
    a = model_side(kappa, b, c, alpha)
    back = comparison_angle(kappa, (a, b, c))
    assert back == pytest.approx(alpha, abs=1e-10)


def test_kappa_continuity_near_zero():
    rng = np.random.default_rng(0)
    b = rng.uniform(0.1, 2.0, 1000)
    c = rng.uniform(0.1, 2.0, 1000)
    a = np.abs(b - c) + rng.uniform(0, 1, 1000) * (b + c - np.abs(b - c)) * 0.98
    base = comparison_angle_batch(0.0, a, b, c)
    for kappa in (1e-4, -1e-4, 1e-6, -1e-6):
        got = comparison_angle_batch(kappa, a, b, c)
        assert np.max(np.abs(got - base)) <= 1e-6


@settings(max_examples=100, deadline=None)
@given(
    kappa=st.sampled_from([-1.0, 0.0, 1.0]),
    b=st.floats(0.2, 1.2),
    c=st.floats(0.2, 1.2),
)
def test_monotone_in_opposite_side(kappa, b, c):
    lo, hi = abs(b - c), b + c
    grid = np.linspace(lo + 1e-9, hi - 1e-9, 12)
    angles = comparison_angle_batch(kappa, grid, np.full_like(grid, b), np.full_like(grid, c))
    assert np.all(np.diff(angles) >= -1e-12)


@settings(max_examples=100, deadline=None)
@given(
    kappa=st.sampled_from([-1.0, 0.0, 1.0]),
    a=st.floats(0.05, 1.2),
    b=st.floats(0.05, 1.2),
    c=st.floats(0.05, 1.2),
    s1=st.floats(0.0, math.pi),
    s2=st.floats(0.0, math.pi),
)
def test_cone_distance_triangle_inequality(kappa, a, b, c, s1, s2):
    # three points on rays at angular positions 0, s1, s1+s2 of the same cone
    if kappa > 0:
        half = d_kappa(kappa) / 2
        a, b, c = (min(x, half * 0.99) for x in (a, b, c))
    d_ab = cone_distance(kappa, a, s1, b)
    d_bc = cone_distance(kappa, b, s2, c)
    d_ac = cone_distance(kappa, a, s1 + s2, c)
    assert d_ac <= d_ab + d_bc + 1e-9


def test_d_kappa_values():
    assert d_kappa(1.0) == pytest.approx(math.pi)
    assert d_kappa(4.0) == pytest.approx(math.pi / 2)
    assert math.isinf(d_kappa(0.0))
    assert math.isinf(d_kappa(-2.0))
