"""Model-space trigonometry shared by every other module.

Curvature ``kappa`` selects the comparison model: the round sphere of
curvature ``kappa`` (> 0), the Euclidean plane (== 0) or the hyperbolic
plane (< 0).  All functions are pure, deterministic, double precision,
and accept scalars or numpy arrays elementwise unless noted otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericInconsistencyError

# Beyond this distance from [-1, 1] an arccos argument is a logic bug,
# not roundoff.
CLAMP_EPS = 1e-12


def d_kappa(kappa: float) -> float:
    """Diameter bound of the model: pi/sqrt(kappa) for kappa > 0, else inf."""
    if kappa > 0.0:
        return math.pi / math.sqrt(kappa)
    return math.inf


@dataclass(frozen=True)
class Curvature:
    """A model curvature together with its derived diameter bound."""

    kappa: float

    @property
    def d_kappa(self) -> float:
        return d_kappa(self.kappa)


@dataclass(frozen=True)
class TriangleSides:
    """Three side lengths A, B, C; A is opposite the vertex of interest."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if a < 0 or b < 0 or c < 0:
            raise DomainError(f"negative side in triangle ({a}, {b}, {c})")
        slack = 1e-12 * max(a, b, c, 1.0)
        if a > b + c + slack or b > a + c + slack or c > a + b + slack:
            raise DomainError(f"triangle inequality fails for ({a}, {b}, {c})")


def sn(kappa, t):
    """Solution of y'' + kappa*y = 0 with y(0)=0, y'(0)=1."""
    t = np.asarray(t, dtype=float)
    if kappa > 0.0:
        r = math.sqrt(kappa)
        out = np.sin(r * t) / r
    elif kappa < 0.0:
        r = math.sqrt(-kappa)
        out = np.sinh(r * t) / r
    else:
        out = t.copy()
    return out if out.ndim else float(out)


def cs(kappa, t):
    """Derivative of sn: cos, 1 or cosh depending on the sign of kappa."""
    t = np.asarray(t, dtype=float)
    if kappa > 0.0:
        out = np.cos(math.sqrt(kappa) * t)
    elif kappa < 0.0:
        out = np.cosh(math.sqrt(-kappa) * t)
    else:
        out = np.ones_like(t)
    return out if out.ndim else float(out)


def tg(kappa, t):
    """sn/cs; domain error where cs vanishes."""
    c = np.asarray(cs(kappa, t), dtype=float)
    if np.any(c == 0.0):
        raise DomainError("tg undefined where cs vanishes")
    out = np.asarray(sn(kappa, t), dtype=float) / c
    return out if out.ndim else float(out)


def rho(kappa, t):
    """Integral of sn from 0 to t; equals (cs - 1)/(-kappa) for kappa != 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise DomainError("rho requires t >= 0")
    if kappa == 0.0:
        out = 0.5 * t * t
    else:
        out = (np.asarray(cs(kappa, t), dtype=float) - 1.0) / (-kappa)
    return out if out.ndim else float(out)


def _clamped_arccos(arg, clamp=False):
    arg = np.asarray(arg, dtype=float)
    if clamp:
        return np.arccos(np.clip(arg, -1.0, 1.0))
    bad = np.abs(arg) > 1.0 + CLAMP_EPS
    if np.any(bad):
        worst = float(np.max(np.abs(arg)))
        raise NumericInconsistencyError(
            f"arccos argument {worst} exceeds 1 by more than {CLAMP_EPS}"
        )
    return np.arccos(np.clip(arg, -1.0, 1.0))


def comparison_angle_batch(kappa, a, b, c, clamp=False):
    """Vectorized comparison angle at the vertex opposite side ``a``.

    Degenerate inputs (b*c == 0, or perimeter >= 2*D_kappa when kappa > 0)
    give 0.  With ``clamp=True`` arccos arguments are clipped to [-1, 1]
    unconditionally; the default raises past the roundoff guard.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    a, b, c = np.broadcast_arrays(a, b, c)
    out = np.zeros(a.shape, dtype=float)
    ok = (b > 0.0) & (c > 0.0)
    if kappa > 0.0:
        ok = ok & (a + b + c < 2.0 * d_kappa(kappa))
    if not np.any(ok):
        return out
    av, bv, cv = a[ok], b[ok], c[ok]
    if kappa == 0.0:
        arg = (bv * bv + cv * cv - av * av) / (2.0 * bv * cv)
    else:
        arg = (cs(kappa, av) - cs(kappa, bv) * cs(kappa, cv)) / (
            kappa * sn(kappa, bv) * sn(kappa, cv)
        )
    out[ok] = _clamped_arccos(arg, clamp=clamp)
    return out


def comparison_angle(kappa, sides, clamp=False) -> float:
    """Comparison angle for a TriangleSides or an (A, B, C) triple."""
    if isinstance(sides, TriangleSides):
        a, b, c = sides.a, sides.b, sides.c
    else:
        a, b, c = sides
    return float(comparison_angle_batch(kappa, a, b, c, clamp=clamp))


def _hinge_side(kappa, b, c, alpha, clamp=False):
    """Third side of the model hinge with legs b, c and angle alpha."""
    if kappa == 0.0:
        val = b * b + c * c - 2.0 * b * c * math.cos(alpha)
        return math.sqrt(max(val, 0.0))
    arg = cs(kappa, b) * cs(kappa, c) + kappa * sn(kappa, b) * sn(kappa, c) * math.cos(alpha)
    if kappa > 0.0:
        return float(_clamped_arccos(arg, clamp=clamp)) / math.sqrt(kappa)
    # kappa < 0: argument is >= 1 up to roundoff
    if arg < 1.0 - CLAMP_EPS:
        raise NumericInconsistencyError(f"arccosh argument {arg} below 1")
    return math.acosh(max(arg, 1.0)) / math.sqrt(-kappa)


def cone_distance(kappa, a, sigma, b) -> float:
    """Distance in the kappa-cone between (a, xi) and (b, eta) with |xi eta| = sigma.

    The angle is capped at pi; a and b must lie in [0, D_kappa/2).
    """
    half = d_kappa(kappa) / 2.0
    if not (0.0 <= a < half and 0.0 <= b < half):
        raise DomainError(f"cone radii ({a}, {b}) outside [0, {half})")
    if sigma < 0.0:
        raise DomainError("cone angle must be nonnegative")
    return _hinge_side(kappa, a, b, min(sigma, math.pi))


def model_side(kappa, b, c, alpha) -> float:
    """Side A with comparison_angle(kappa, (A; B, C)) == alpha, when it exists."""
    if not (0.0 <= alpha <= math.pi + CLAMP_EPS):
        raise DomainError(f"hinge angle {alpha} outside [0, pi]")
    if b < 0.0 or c < 0.0:
        raise DomainError("hinge legs must be nonnegative")
    if kappa > 0.0 and (b >= d_kappa(kappa) or c >= d_kappa(kappa)):
        raise DomainError("hinge legs reach the model diameter; no solution")
    return _hinge_side(kappa, b, c, min(alpha, math.pi))
