"""Steering ellipse of an X state and its inverse.

Only the x-z cross-section matters for the optimisation; ``l2`` (the
y semi-axis) is stored for completeness.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import XState, validate_xstate
from .errors import AmbiguousBranch, DomainError, InvalidState, NoSolution

# semi-axes below this are treated as collapsed
DEGENERACY_TOL = 1e-10


class Degeneracy(enum.Enum):
    FULL = "Full"
    FLAT_Y = "FlatY"
    FLAT_Z = "FlatZ"
    SEGMENT = "Segment"
    POINT = "Point"


@dataclass(frozen=True)
class SteeringEllipse:
    l1: float
    l2: float
    l3: float
    z0: float
    z_A: float
    z_B: float
    degeneracy: Degeneracy

    @property
    def z_G(self) -> float:
        """Upper vertex."""
        return self.z0 + self.l3

    @property
    def z_H(self) -> float:
        """Lower vertex."""
        return self.z0 - self.l3

    @property
    def flat_z(self) -> bool:
        return self.degeneracy in (Degeneracy.FLAT_Z, Degeneracy.POINT)

    @property
    def segment(self) -> bool:
        return self.degeneracy in (Degeneracy.SEGMENT, Degeneracy.POINT)

    def contains(self, x: float, z: float, tol: float = 1e-10) -> bool:
        if self.flat_z:
            return abs(z - self.z0) <= tol and abs(x) <= self.l1 + tol
        if self.segment:
            return abs(x) <= tol and self.z_H - tol <= z <= self.z_G + tol
        return (x / self.l1) ** 2 + ((z - self.z0) / self.l3) ** 2 <= 1.0 + tol

    def boundary_residual(self, x: float, z: float) -> float:
        """Distance-like residual of (x, z) from the boundary curve.

        Uses the algebraic form l3^2 x^2 + l1^2 (z-z0)^2 - l1^2 l3^2, which
        stays meaningful for the collapsed cases.
        """
        l1, l3 = self.l1, self.l3
        if self.segment:
            return abs(x)
        return abs(l3 * l3 * x * x + l1 * l1 * (z - self.z0) ** 2 - l1 * l1 * l3 * l3) / max(
            l1 * l1, l3 * l3, 1e-300
        )


def _classify(l1, l2, l3):
    if l1 < DEGENERACY_TOL and l3 < DEGENERACY_TOL:
        return Degeneracy.POINT
    if l1 < DEGENERACY_TOL:
        return Degeneracy.SEGMENT
    if l3 < DEGENERACY_TOL:
        return Degeneracy.FLAT_Z
    if l2 < DEGENERACY_TOL:
        return Degeneracy.FLAT_Y
    return Degeneracy.FULL


def ellipse_from_xstate(state: XState) -> SteeringEllipse:
    """Semi-axes and centre of the steering ellipse of ``state``.

    When A is pure ((a+b)(c+d) = 0) the state is a product and the ellipse
    collapses to the point (0, z_B).
    """
    a, b, c, d, u, v = state.a, state.b, state.c, state.d, state.u, state.v
    pa, pb = a + b, c + d
    prod = pa * pb
    if prod < 1e-300:
        return SteeringEllipse(0.0, 0.0, 0.0, state.z_B, state.z_A, state.z_B, Degeneracy.POINT)
    root = math.sqrt(prod)
    l1 = (u + v) / root
    l2 = abs(u - v) / root
    l3 = abs(a * d - b * c) / prod
    z0 = (a * c - b * d) / prod
    return SteeringEllipse(l1, l2, l3, z0, state.z_A, state.z_B, _classify(l1, l2, l3))


def x_on_ellipse(ell: SteeringEllipse, z: float) -> float:
    """Half-width x(z) = l1 sqrt(1 - (z-z0)^2/l3^2) of the ellipse at height z."""
    if z < ell.z_H - 1e-12 or z > ell.z_G + 1e-12:
        raise DomainError(f"z={z} outside [{ell.z_H}, {ell.z_G}]")
    if ell.flat_z:
        return ell.l1
    # factored form is exact at the vertices, where 1 - t^2 would leave roundoff under a sqrt
    w = (z - ell.z_H) * (ell.z_G - z) / (ell.l3 * ell.l3)
    return ell.l1 * math.sqrt(max(w, 0.0))


def ellipse_preimages(l1, l2, l3, z0, z_B, tol=1e-12) -> list[XState]:
    """Every X state (u, v >= 0) whose ellipse has the given parameters.

    Writing a = alpha p, b = alpha (1-p), c = (1-alpha) q, d = (1-alpha)(1-q),
    the vertices are 2p-1 and 2q-1, z_B = alpha (2p-1) + (1-alpha)(2q-1)
    and the coherences scale with sqrt(alpha (1-alpha)). The only freedom
    left is which vertex belongs to p (the sign of ad-bc) and the order of
    u and v.
    """
    if min(l1, l2, l3) < -tol or l2 > l1 + tol:
        return []
    if l3 < DEGENERACY_TOL:
        if abs(z_B - z0) > 1e-10:
            return []
        # alpha is free on a flat ellipse; take the balanced choice
        branches = [(z0, z0, 0.5)]
    else:
        branches = []
        for g, hq in ((z0 + l3, z0 - l3), (z0 - l3, z0 + l3)):
            branches.append((g, hq, (z_B - hq) / (g - hq)))
    out: list[XState] = []
    for g, hq, alpha in branches:
        if abs(g) > 1.0 + tol or abs(hq) > 1.0 + tol or alpha < -tol or alpha > 1.0 + tol:
            continue
        p = min(max(0.5 * (1.0 + g), 0.0), 1.0)
        q = min(max(0.5 * (1.0 + hq), 0.0), 1.0)
        alpha = min(max(alpha, 0.0), 1.0)
        a, b = alpha * p, alpha * (1.0 - p)
        c, d = (1.0 - alpha) * q, (1.0 - alpha) * (1.0 - q)
        root = math.sqrt(alpha * (1.0 - alpha))
        s, dlt = l1 * root, l2 * root
        for u, v in (((s + dlt) / 2, (s - dlt) / 2), ((s - dlt) / 2, (s + dlt) / 2)):
            try:
                cand = validate_xstate(a, b, c, d, max(u, 0.0), max(v, 0.0))
            except InvalidState:
                continue
            if not any(_same(cand, o) for o in out):
                out.append(cand)
    return out


def _same(s1, s2, tol=1e-14):
    return all(abs(getattr(s1, k) - getattr(s2, k)) <= tol for k in "abcduv")


def xstate_from_ellipse(l1, l2, l3, z0, z_B, branch: str | None = None) -> XState:
    """An X state realising the ellipse (l1, l2, l3, z0) with reduced point z_B.

    Parameters
    ----------
    branch : {"ad>bc", "ad<bc", None}
        Sign of ad-bc. With ``None`` the call raises :class:`AmbiguousBranch`
        when both signs are physical. Within a branch the solution with
        u >= v is preferred.

    Raises
    ------
    NoSolution
        No physical state has this ellipse (e.g. it leaves the unit disk).
    """
    if branch not in (None, "ad>bc", "ad<bc"):
        raise ValueError(f"unknown branch {branch!r}")
    sols = ellipse_preimages(l1, l2, l3, z0, z_B)
    if not sols:
        raise NoSolution(f"no physical X state has ellipse l1={l1}, l2={l2}, l3={l3}, z0={z0}, z_B={z_B}")
    if branch == "ad>bc":
        sols = [s for s in sols if s.a * s.d - s.b * s.c >= -1e-15]
    elif branch == "ad<bc":
        sols = [s for s in sols if s.a * s.d - s.b * s.c <= 1e-15]
    if not sols:
        raise NoSolution(f"branch {branch} is unphysical for this ellipse")
    signs = {s.a * s.d - s.b * s.c > 0 for s in sols}
    if branch is None and len(signs) > 1:
        raise AmbiguousBranch(sols)
    sols.sort(key=lambda s: s.v - s.u)
    return sols[0]
