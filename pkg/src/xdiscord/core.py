"""Two-qubit X states: validation, entropies and the planar steering map.

Basis ordering is |00>, |01>, |10>, |11> with qubit A first, so the state

    [[a, 0, 0, u],
     [0, b, v, 0],
     [0, v, c, 0],
     [u, 0, 0, d]]

has Bloch components z_A = a+b-c-d, z_B = a-b+c-d and correlation matrix
T = diag(2(u+v), 2(v-u), a-b-c+d). All entropies are in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateOutcome,
    DomainError,
    InvalidPovm,
    InvalidState,
    NegativeWeight,
    PositivityViolated,
    TraceNotOne,
)

TOL = 1e-12


@dataclass(frozen=True)
class ReducedBloch:
    z_A: float
    z_B: float


@dataclass(frozen=True)
class XState:
    """Six real parameters of an X state with u, v >= 0.

    Build instances with :func:`validate_xstate`; the constructor itself
    does not check anything.
    """

    a: float
    b: float
    c: float
    d: float
    u: float
    v: float

    @property
    def z_A(self) -> float:
        return self.a + self.b - self.c - self.d

    @property
    def z_B(self) -> float:
        return self.a - self.b + self.c - self.d

    @property
    def reduced(self) -> ReducedBloch:
        return ReducedBloch(self.z_A, self.z_B)

    @property
    def txx(self) -> float:
        return 2.0 * (self.u + self.v)

    @property
    def tzz(self) -> float:
        return self.a - self.b - self.c + self.d

    @property
    def eigenvalues(self) -> tuple[float, float, float, float]:
        return xstate_eigenvalues(self)

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in "abcduv"}

    def density_matrix(self) -> np.ndarray:
        a, b, c, d, u, v = self.a, self.b, self.c, self.d, self.u, self.v
        return np.array([[a, 0, 0, u], [0, b, v, 0], [0, v, c, 0], [u, 0, 0, d]], dtype=float)


@dataclass(frozen=True)
class Povm:
    """Planar rank-1 POVM with elements t (1 + n.sigma) / 2.

    ``elements`` is a tuple of ``(t, (n_x, n_z))`` pairs.
    """

    elements: tuple[tuple[float, tuple[float, float]], ...]

    def __post_init__(self):
        elems = tuple((float(t), (float(n[0]), float(n[1]))) for t, n in self.elements)
        object.__setattr__(self, "elements", elems)
        if not elems:
            raise InvalidPovm("empty POVM")
        for t, (nx, nz) in elems:
            if not t > 0.0:
                raise InvalidPovm(f"non-positive weight {t}")
            if abs(math.hypot(nx, nz) - 1.0) > 1e-12:
                raise InvalidPovm(f"direction ({nx}, {nz}) is not a unit vector")
        res = self.completeness_residual()
        if res > 1e-10:
            raise InvalidPovm(f"completeness violated by {res:.3e}")

    def completeness_residual(self) -> float:
        """max(|sum t - 2|, |sum t n|)."""
        st = sum(t for t, _ in self.elements)
        sx = sum(t * n[0] for t, n in self.elements)
        sz = sum(t * n[1] for t, n in self.elements)
        return max(abs(st - 2.0), math.hypot(sx, sz))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class SteeredOutcome:
    probability: float
    point: tuple[float, float]


def validate_xstate(a, b, c, d, u, v) -> XState:
    """Check the six parameters and return an :class:`XState`.

    Negative coherences are accepted and replaced by their absolute value:
    the sign of u and v is removed by a local diagonal unitary and changes
    no entropic quantity. Nothing else is repaired; anything outside the
    1e-12 tolerance raises.

    Raises
    ------
    NegativeWeight, TraceNotOne, PositivityViolated
    """
    vals = [float(x) for x in (a, b, c, d, u, v)]
    if not all(math.isfinite(x) for x in vals):
        raise InvalidState("all parameters must be finite", float("nan"))
    a, b, c, d, u, v = vals
    for name, x in zip("abcd", (a, b, c, d)):
        if x < -TOL:
            raise NegativeWeight(f"{name} >= 0", -x)
    trace = a + b + c + d
    if abs(trace - 1.0) > TOL:
        raise TraceNotOne("a+b+c+d = 1", abs(trace - 1.0))
    u, v = abs(u), abs(v)
    if u * u > a * d + TOL:
        raise PositivityViolated("u^2 <= a*d", u * u - a * d)
    if v * v > b * c + TOL:
        raise PositivityViolated("v^2 <= b*c", v * v - b * c)
    return XState(a, b, c, d, u, v)


def binary_entropy(x: float) -> float:
    """h(x) = -(1+x)/2 log2((1+x)/2) - (1-x)/2 log2((1-x)/2) for x in [0, 1]."""
    if x < -TOL or x > 1.0 + TOL or math.isnan(x):
        raise DomainError(f"binary_entropy argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    p = 0.5 * (1.0 + x)
    q = 0.5 * (1.0 - x)
    out = -p * math.log2(p)
    if q > 0.0:
        out -= q * math.log2(q)
    return out


def shannon_bits(probs: Sequence[float]) -> float:
    out = 0.0
    for p in probs:
        if p > 0.0:
            out -= p * math.log2(p)
    return out


def xstate_eigenvalues(state: XState) -> tuple[float, float, float, float]:
    """Closed-form spectrum of the two 2x2 blocks."""
    a, b, c, d, u, v = state.a, state.b, state.c, state.d, state.u, state.v
    m1, r1 = 0.5 * (a + d), math.hypot(0.5 * (a - d), u)
    m2, r2 = 0.5 * (b + c), math.hypot(0.5 * (b - c), v)
    return (m1 + r1, m1 - r1, m2 + r2, m2 - r2)


def joint_entropy(state: XState) -> float:
    return shannon_bits(xstate_eigenvalues(state))


def mutual_information(state: XState) -> float:
    s_a = binary_entropy(min(abs(state.z_A), 1.0))
    s_b = binary_entropy(min(abs(state.z_B), 1.0))
    return s_a + s_b - joint_entropy(state)


def steer(state: XState, n: Sequence[float], t: float = 1.0) -> SteeredOutcome:
    """Outcome of the element t (1 + n.sigma)/2 measured on A.

    ``n`` is ``(n_x, n_z)``. The returned point is the x-z Bloch vector of
    B's conditional state.
    """
    nx, nz = float(n[0]), float(n[1])
    if abs(math.hypot(nx, nz) - 1.0) > 1e-12:
        raise DomainError(f"direction ({nx}, {nz}) is not a unit vector")
    if not t > 0.0:
        raise DomainError(f"element weight {t} must be positive")
    den = 1.0 + nz * state.z_A
    if den < 1e-14:
        raise DegenerateOutcome(f"direction ({nx}, {nz}) has zero probability")
    point = (state.txx * nx / den, (state.z_B + state.tzz * nz) / den)
    return SteeredOutcome(0.5 * t * den, point)


def conditional_entropy(state: XState, povm: Povm) -> float:
    """S(B|M) = sum_i p_i h(|r_i|) for a planar rank-1 POVM on A.

    Outcomes of zero probability contribute nothing.
    """
    total = 0.0
    for t, n in povm:
        if 1.0 + n[1] * state.z_A < 1e-14:
            continue
        out = steer(state, n, t)
        total += out.probability * binary_entropy(min(math.hypot(*out.point), 1.0))
    return total
