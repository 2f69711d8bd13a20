"""Optimal decomposition of the reduced state and the resulting discord.

The minimal average entropy over all measurements on A equals the lower
convex envelope of the horizontal entropy curve S(z) at z_B. Because S has
at most one inflection point the envelope takes one of three forms:

* S itself (convex curve): horizontal chord, a sigma_x measurement;
* the full chord from z_H to z_G (concave curve): sigma_z measurement;
* S up to a tangent point z*, then the tangent line to the far vertex:
  for z_B beyond z*, a three-element POVM {vertex, (+x*, z*), (-x*, z*)}.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import Povm, XState, binary_entropy, mutual_information, steer
from .curve import (
    ConvexityClass,
    Convexity,
    EntropyCurve,
    Endpoint,
    classify_convexity,
    tangent_from_endpoint,
)
from .errors import InversionFailed, LemmaViolation
from .geometry import SteeringEllipse, ellipse_from_xstate, x_on_ellipse

BOUNDARY_TOL = 1e-10


class Kind(enum.Enum):
    HORIZONTAL = "Horizontal"
    VERTICAL = "Vertical"
    TRIANGLE_UPPER = "TriangleUpper"
    TRIANGLE_LOWER = "TriangleLower"

    @property
    def is_triangle(self) -> bool:
        return self in (Kind.TRIANGLE_UPPER, Kind.TRIANGLE_LOWER)


class EllipseClass(enum.Enum):
    HORIZONTAL_TYPE = "HorizontalType"
    VERTICAL_TYPE = "VerticalType"
    TRIANGLE_TYPE = "TriangleType"


@dataclass(frozen=True)
class Decomposition:
    """Optimal ensemble of B's reduced state on the ellipse boundary.

    ``components`` holds ``(weight, (x, z))`` pairs. ``z_star`` and
    ``p_star`` are set for the triangle kinds. ``lemma_violation`` marks a
    result produced by the brute-force envelope because the curve had more
    than one inflection point.
    """

    kind: Kind
    components: tuple[tuple[float, tuple[float, float]], ...]
    s_bar_min: float
    z_star: float | None = None
    p_star: float | None = None
    lemma_violation: bool = False

    def barycenter(self) -> tuple[float, float]:
        x = sum(w * p[0] for w, p in self.components)
        z = sum(w * p[1] for w, p in self.components)
        return x, z


@dataclass(frozen=True)
class DiscordResult:
    mutual_information: float
    classical_correlation: float
    discord: float
    decomposition: Decomposition
    ellipse_class: EllipseClass
    z_star: float | None
    convexity: ConvexityClass | None
    # S_horizontal <= S_vertical over the whole interval (premise for a triangle-type ellipse)
    horizontal_below_vertical: bool | None

    @property
    def kind(self) -> Kind:
        return self.decomposition.kind


@dataclass(frozen=True)
class Analysis:
    """Everything the decision tree looked at for one state."""

    state: XState
    ellipse: SteeringEllipse
    curve: EntropyCurve | None
    convexity: ConvexityClass | None
    z_star: float | None
    decomposition: Decomposition
    ellipse_class: EllipseClass


def _entropy_of(point):
    return binary_entropy(min(math.hypot(*point), 1.0))


def _build(kind, comps, **extra):
    comps = tuple((float(w), (float(p[0]), float(p[1]))) for w, p in comps)
    s = sum(w * _entropy_of(p) for w, p in comps)
    return Decomposition(kind, comps, s, **extra)


def _horizontal(z_b, x):
    return _build(Kind.HORIZONTAL, [(0.5, (x, z_b)), (0.5, (-x, z_b))])


def _vertical(ell, z_b):
    p_g = min(max((z_b - ell.z_H) / (ell.z_G - ell.z_H), 0.0), 1.0)
    return _build(Kind.VERTICAL, [(p_g, (0.0, ell.z_G)), (1.0 - p_g, (0.0, ell.z_H))])


def _triangle(ell, z_b, z_star, upper):
    x = x_on_ellipse(ell, z_star)
    if upper:
        vertex = ell.z_G
        p_star = (ell.z_G - z_b) / (ell.z_G - z_star)
        kind = Kind.TRIANGLE_UPPER
    else:
        vertex = ell.z_H
        p_star = (z_b - ell.z_H) / (z_star - ell.z_H)
        kind = Kind.TRIANGLE_LOWER
    comps = [(1.0 - p_star, (0.0, vertex)), (0.5 * p_star, (x, z_star)), (0.5 * p_star, (-x, z_star))]
    return _build(kind, comps, z_star=z_star, p_star=p_star)


def _from_oracle(ell, z_b):
    from .oracle import ensemble_oracle

    res = ensemble_oracle(ell, z_b, 4096)
    zs = sorted({round(p[1], 12) for _, p in res.support})
    span = ell.z_G - ell.z_H
    top = abs(zs[-1] - ell.z_G) <= 2 * span / 4096
    bottom = abs(zs[0] - ell.z_H) <= 2 * span / 4096
    if len(zs) == 1:
        kind = Kind.HORIZONTAL
    elif top and bottom:
        kind = Kind.VERTICAL
    elif top:
        kind = Kind.TRIANGLE_UPPER
    elif bottom:
        kind = Kind.TRIANGLE_LOWER
    else:
        kind = Kind.HORIZONTAL
    return _build(kind, res.support, lemma_violation=True)


def analyse(state: XState) -> Analysis:
    """Run the full decision tree and keep the intermediate objects."""
    ell = ellipse_from_xstate(state)
    z_b = state.z_B
    if ell.flat_z or ell.segment:
        # ad = bc makes the steering map singular along z: the ends (+-l1, z_B)
        # cannot be reached together by one POVM unless z_A = 0. sigma_x steers
        # to (+-2(u+v), z_B), which is optimal on a flat ellipse. Near-collapsed
        # ellipses keep whichever of sigma_x / sigma_z is lower.
        # (Everywhere else 2(u+v) is also the ellipse half-width at z_B; using
        # it directly avoids cancellation on very thin ellipses.)
        cands = [_horizontal(z_b, state.txx)]
        if ell.z_G > ell.z_H:
            # ties go to the first entry: sigma_z on a segment, sigma_x on a flat ellipse
            vert = _vertical(ell, z_b)
            cands = [vert] + cands if ell.segment else cands + [vert]
        dec = min(cands, key=lambda d: d.s_bar_min)
        eclass = EllipseClass.HORIZONTAL_TYPE if dec.kind is Kind.HORIZONTAL else EllipseClass.VERTICAL_TYPE
        return Analysis(state, ell, None, None, None, dec, eclass)

    curve = EntropyCurve.from_ellipse(ell)
    try:
        cls = classify_convexity(curve)
    except LemmaViolation:
        dec = _from_oracle(ell, z_b)
        eclass = EllipseClass.TRIANGLE_TYPE if dec.kind.is_triangle else EllipseClass.HORIZONTAL_TYPE
        return Analysis(state, ell, curve, None, None, dec, eclass)

    if cls.tag is Convexity.CONVEX:
        return Analysis(state, ell, curve, cls, None, _horizontal(z_b, state.txx), EllipseClass.HORIZONTAL_TYPE)
    if cls.tag is Convexity.CONCAVE:
        return Analysis(state, ell, curve, cls, None, _vertical(ell, z_b), EllipseClass.VERTICAL_TYPE)

    upper = cls.convex_below
    z_star = tangent_from_endpoint(curve, Endpoint.UPPER if upper else Endpoint.LOWER, cls)
    if z_star is None:
        # tangent absent: the full chord is the envelope everywhere
        return Analysis(state, ell, curve, cls, None, _vertical(ell, z_b), EllipseClass.VERTICAL_TYPE)

    if upper:
        if z_b <= z_star + BOUNDARY_TOL:
            dec = _horizontal(z_b, state.txx)
        elif z_b >= ell.z_G - BOUNDARY_TOL:
            dec = _vertical(ell, z_b)
        else:
            dec = _triangle(ell, z_b, z_star, True)
    else:
        if z_b >= z_star - BOUNDARY_TOL:
            dec = _horizontal(z_b, state.txx)
        elif z_b <= ell.z_H + BOUNDARY_TOL:
            dec = _vertical(ell, z_b)
        else:
            dec = _triangle(ell, z_b, z_star, False)
    return Analysis(state, ell, curve, cls, z_star, dec, EllipseClass.TRIANGLE_TYPE)


def optimal_decomposition(state: XState) -> Decomposition:
    return analyse(state).decomposition


def horizontal_below_vertical(curve: EntropyCurve, n: int = 1024, slack: float = 1e-10) -> bool:
    """True when S_horizontal <= S_vertical at every point of an n-point grid."""
    zs = np.linspace(curve.z_H, curve.z_G, n)
    s_h = curve.evaluate(zs)[0]
    s_g = binary_entropy(min(abs(curve.z_G), 1.0))
    s_l = binary_entropy(min(abs(curve.z_H), 1.0))
    p_g = (zs - curve.z_H) / (curve.z_G - curve.z_H)
    s_v = p_g * s_g + (1.0 - p_g) * s_l
    return bool(np.all(s_h <= s_v + slack))


def quantum_discord(state: XState) -> DiscordResult:
    """Mutual information, classical correlation and discord (bits).

    The measurement is on qubit A; C = S(B) - min S(B|M), Q = I - C.
    """
    an = analyse(state)
    info = mutual_information(state)
    s_b = binary_entropy(min(abs(state.z_B), 1.0))
    classical = s_b - an.decomposition.s_bar_min
    premise = horizontal_below_vertical(an.curve) if an.curve is not None else None
    return DiscordResult(
        mutual_information=info,
        classical_correlation=classical,
        discord=info - classical,
        decomposition=an.decomposition,
        ellipse_class=an.ellipse_class,
        z_star=an.z_star,
        convexity=an.convexity,
        horizontal_below_vertical=premise,
    )


def reconstruct_povm(state: XState, decomposition: Decomposition) -> Povm:
    """The rank-1 POVM on A that steers B into ``decomposition``."""
    kind = decomposition.kind
    if kind is Kind.HORIZONTAL:
        return Povm(((1.0, (1.0, 0.0)), (1.0, (-1.0, 0.0))))
    if kind is Kind.VERTICAL:
        return Povm(((1.0, (0.0, 1.0)), (1.0, (0.0, -1.0))))

    z_a, z_b = state.z_A, state.z_B
    z_star = decomposition.z_star
    (w_v, (_, z_vertex)), (w_p, _), _ = decomposition.components
    # pole direction: the one of +z / -z that steers to the vertex
    nz_v = min((1.0, -1.0), key=lambda s: abs(steer(state, (0.0, s)).point[1] - z_vertex))
    # z(cos) = (z_B + Tzz cos) / (1 + z_A cos) is a Moebius map; invert it
    den = z_star * z_a - state.tzz
    if abs(den) < 1e-15:
        raise InversionFailed("steering map is flat in the polar angle")
    cos_t = (z_b - z_star) / den
    if abs(cos_t) > 1.0 + 1e-12:
        raise InversionFailed(f"no direction steers to z*={z_star} (cos={cos_t})")
    cos_t = min(max(cos_t, -1.0), 1.0)
    sin_t = math.sqrt(max(1.0 - cos_t * cos_t, 0.0))
    z_got = steer(state, (sin_t, cos_t)).point[1]
    if abs(z_got - z_star) > 1e-10:
        raise InversionFailed(f"inverted direction steers to {z_got}, wanted {z_star}")
    t_v = 2.0 * w_v / (1.0 + nz_v * z_a)
    t_p = 2.0 * w_p / (1.0 + cos_t * z_a)
    return Povm(((t_v, (0.0, nz_v)), (t_p, (sin_t, cos_t)), (t_p, (-sin_t, cos_t))))
