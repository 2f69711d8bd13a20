"""The horizontal entropy curve S(z) = h(r(z)) over [z_H, z_G].

r(z) is the Bloch radius of the two ellipse points at height z, so S(z) is
the average entropy of the horizontal chord through (0, z). The minimal
average entropy of the reduced state at z_B is the lower convex envelope of
S evaluated at z_B; everything in here serves that envelope.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import binary_entropy
from .errors import (
    DegenerateEllipse,
    DomainError,
    LemmaViolation,
    SingularBracket,
    SingularPoint,
    XDiscordError,
)
from .geometry import DEGENERACY_TOL, SteeringEllipse

GRID_POINTS = 1024
CONVEXITY_TOL = 1e-9
SINGULAR_GAP = 1e-9


class PreconditionError(XDiscordError, ValueError):
    pass


class Convexity(enum.Enum):
    CONVEX = "Convex"
    CONCAVE = "Concave"
    SINGLE_INFLECTION = "SingleInflection"


class Endpoint(enum.Enum):
    UPPER = "Upper"
    LOWER = "Lower"


@dataclass(frozen=True)
class ConvexityClass:
    tag: Convexity
    z_c: float | None = None
    # for SingleInflection: True when S is convex below z_c and concave above
    convex_below: bool | None = None


@dataclass(frozen=True)
class EntropyCurve:
    l1: float
    l3: float
    z0: float

    @classmethod
    def from_ellipse(cls, ell: SteeringEllipse) -> "EntropyCurve":
        return cls(ell.l1, ell.l3, ell.z0)

    @property
    def z_G(self) -> float:
        return self.z0 + self.l3

    @property
    def z_H(self) -> float:
        return self.z0 - self.l3

    @property
    def flat(self) -> bool:
        return self.l3 < DEGENERACY_TOL

    def evaluate(self, z):
        """Vectorised (S, S', S'') on an array of heights; NaN derivatives at pure points."""
        if self.flat:
            raise DegenerateEllipse("curve of a flat ellipse has no derivatives")
        return _kernels.curve_eval(self.l1, self.l3, self.z0, np.asarray(z, dtype=float))


def _check(curve: EntropyCurve, z: float) -> float:
    if z < curve.z_H - 1e-12 or z > curve.z_G + 1e-12:
        raise DomainError(f"z={z} outside [{curve.z_H}, {curve.z_G}]")
    return min(max(z, curve.z_H), curve.z_G)


def r_of_z(curve: EntropyCurve, z: float) -> float:
    z = _check(curve, z)
    if curve.flat:
        q = z * z + curve.l1 * curve.l1
    else:
        w = max(1.0 - ((z - curve.z0) / curve.l3) ** 2, 0.0)
        q = z * z + curve.l1 * curve.l1 * w
    r = math.sqrt(q)
    if r > 1.0 + 1e-12:
        raise DomainError(f"r({z}) = {r} exceeds 1")
    return min(r, 1.0)


def s_horizontal(curve: EntropyCurve, z: float) -> float:
    return binary_entropy(r_of_z(curve, z))


def _derivs(curve, z):
    z = _check(curve, z)
    if curve.flat:
        raise DegenerateEllipse("curve of a flat ellipse has no derivatives")
    _, d1, d2 = _kernels.curve_point(curve.l1, curve.l3, curve.z0, z)
    if math.isnan(d1):
        raise SingularPoint(f"steered state at z={z} is pure; derivative diverges")
    return d1, d2


def s_horizontal_d1(curve: EntropyCurve, z: float) -> float:
    return _derivs(curve, z)[0]


def s_horizontal_d2(curve: EntropyCurve, z: float) -> float:
    return _derivs(curve, z)[1]


def s_vertical(curve: EntropyCurve, z: float) -> float:
    """Average entropy of the vertical chord {G, H} through (0, z)."""
    if curve.flat:
        raise DegenerateEllipse("vertical decomposition undefined on a flat ellipse")
    z = _check(curve, z)
    p_g = (z - curve.z_H) / (curve.z_G - curve.z_H)
    s_g = binary_entropy(min(abs(curve.z_G), 1.0))
    s_h = binary_entropy(min(abs(curve.z_H), 1.0))
    return p_g * s_g + (1.0 - p_g) * s_h


def delta(curve: EntropyCurve, z: float) -> float:
    return s_horizontal(curve, z) - s_vertical(curve, z)


def interior_grid(curve: EntropyCurve, n: int = GRID_POINTS) -> np.ndarray:
    span = curve.z_G - curve.z_H
    return curve.z_H + span * np.arange(1, n + 1) / (n + 1)


def _d2_at(curve, z):
    return _kernels.curve_point(curve.l1, curve.l3, curve.z0, z)[2]


def _refine_sign_change(curve, lo, hi, s_lo):
    # invariant: sign(d2(lo)) == s_lo, sign(d2(hi)) == -s_lo
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        v = _d2_at(curve, mid)
        if math.isnan(v) or (v > 0) == (s_lo > 0):
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def classify_convexity(curve: EntropyCurve) -> ConvexityClass:
    """Convex, Concave or SingleInflection from the sign of S'' on a grid.

    Grid points whose steered state is within 1e-9 of pure are skipped. If
    every grid point is that close to pure, the sign of S - chord at the
    midpoint decides between Convex and Concave.

    Raises
    ------
    LemmaViolation
        S'' changes sign more than once.
    DomainError
        The curve leaves the unit disk (no physical state has it).
    """
    if curve.flat:
        raise PreconditionError("classify_convexity needs a non-flat curve")
    zs = interior_grid(curve)
    r2 = zs * zs + curve.l1 * curve.l1 * (1.0 - ((zs - curve.z0) / curve.l3) ** 2)
    if r2.max() > 1.0 + 1e-12:
        raise DomainError(f"curve leaves the unit disk (max r^2 = {r2.max():.6g})")
    _, _, d2 = _kernels.curve_eval(curve.l1, curve.l3, curve.z0, zs)
    ok = ~np.isnan(d2)
    if not ok.any():
        mid = curve.z0
        f_mid = _kernels.curve_point(curve.l1, curve.l3, curve.z0, mid)[0]
        chord = 0.5 * (binary_entropy(min(abs(curve.z_G), 1.0)) + binary_entropy(min(abs(curve.z_H), 1.0)))
        return ConvexityClass(Convexity.CONVEX if f_mid <= chord else Convexity.CONCAVE)
    vals = d2[ok]
    if vals.min() >= -CONVEXITY_TOL:
        return ConvexityClass(Convexity.CONVEX)
    if vals.max() <= CONVEXITY_TOL:
        return ConvexityClass(Convexity.CONCAVE)

    sig = ok & (np.abs(np.where(ok, d2, 0.0)) > CONVEXITY_TOL)
    idx = np.flatnonzero(sig)
    signs = np.sign(d2[idx])
    flips = np.flatnonzero(signs[1:] != signs[:-1])
    roots = [
        _refine_sign_change(curve, zs[idx[i]], zs[idx[i + 1]], signs[i]) for i in flips
    ]
    if len(roots) != 1:
        raise LemmaViolation(roots)
    return ConvexityClass(Convexity.SINGLE_INFLECTION, float(roots[0]), bool(signs[flips[0]] > 0))


def tangent_residual(curve: EntropyCurve, z: float, endpoint: Endpoint) -> float:
    """S'(z) - (S(z) - S(z_end)) / (z - z_end); zero at a tangent from the endpoint."""
    z_end = curve.z_G if endpoint is Endpoint.UPPER else curve.z_H
    f, d1, _ = _kernels.curve_point(curve.l1, curve.l3, curve.z0, z)
    f_end = _kernels.curve_point(curve.l1, curve.l3, curve.z0, z_end)[0]
    return d1 - (f - f_end) / (z - z_end)


def tangent_from_endpoint(
    curve: EntropyCurve, endpoint: Endpoint | str, cls: ConvexityClass | None = None
) -> float | None:
    """Height z* where the line from the chosen endpoint touches S.

    The search runs between the inflection point and the opposite endpoint.
    Returns None when the residual does not change sign there (no tangent).
    """
    endpoint = Endpoint(endpoint) if isinstance(endpoint, str) else endpoint
    if cls is None:
        cls = classify_convexity(curve)
    if cls.tag is not Convexity.SINGLE_INFLECTION:
        raise PreconditionError(f"tangent needs a SingleInflection curve, got {cls.tag.value}")
    z_c = cls.z_c
    if endpoint is Endpoint.UPPER:
        far, step_dir = curve.z_H, 1.0
    else:
        far, step_dir = curve.z_G, -1.0

    # pull the far end off a pure-state singularity
    shift = 1e-9
    far_end = far
    r_far = tangent_residual(curve, far_end, endpoint)
    while math.isnan(r_far):
        far_end = far + step_dir * shift
        if (far_end - z_c) * step_dir >= 0:
            raise SingularBracket(f"no regular point between {far} and z_c={z_c}")
        r_far = tangent_residual(curve, far_end, endpoint)
        shift *= 10.0
    r_c = tangent_residual(curve, z_c, endpoint)
    if math.isnan(r_c):
        raise SingularBracket(f"residual singular at z_c={z_c}")
    if r_far == 0.0:
        return far_end
    if (r_far > 0) == (r_c > 0):
        return None

    lo, hi, s_lo = far_end, z_c, r_far > 0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        r = tangent_residual(curve, mid, endpoint)
        if (r > 0) == s_lo:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))
