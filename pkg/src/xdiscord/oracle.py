"""Brute-force estimators used to cross-check the geometric solution.

None of these call into the curve or discord modules:

* :func:`ensemble_oracle` samples the ellipse boundary and takes the lower
  convex hull of (z, entropy) -- no measurement operators involved;
* :func:`vonneumann_oracle` sweeps projective measurements through the
  steering map (optionally over the whole Bloch sphere of A);
* :func:`povm_oracle` searches 3- and 4-element planar rank-1 POVMs.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .core import XState, validate_xstate
from .errors import DegenerateEllipse, DomainError
from .geometry import SteeringEllipse


@dataclass(frozen=True)
class OracleResult:
    s_bar_min_estimate: float
    support: tuple[tuple[float, tuple[float, float]], ...]
    grid_size: int

    @property
    def support_z(self) -> tuple[float, ...]:
        return tuple(sorted({p[1] for _, p in self.support}))


def random_xstate(rng: np.random.Generator) -> XState:
    """Uniform diagonal on the simplex, coherences u = s1 sqrt(ad), v = s2 sqrt(bc)."""
    a, b, c, d = rng.dirichlet(np.ones(4))
    s1, s2 = rng.uniform(size=2)
    return validate_xstate(a, b, c, d, s1 * math.sqrt(a * d), s2 * math.sqrt(b * c))


def random_xstates(n: int, seed: int) -> list[XState]:
    rng = np.random.default_rng(seed)
    return [random_xstate(rng) for _ in range(n)]


def ensemble_oracle(ell: SteeringEllipse, z_b: float, n: int = 4096) -> OracleResult:
    """Minimal average entropy of (0, z_b) over ensembles of sampled boundary points.

    The boundary is sampled at n+1 equally spaced heights (so doubling n
    refines the grid). Each height stands for the symmetric pair (+-x, z)
    with common entropy, which reduces the search to the lower convex hull
    of (z_i, h(r_i)) evaluated at z_b.
    """
    if ell.flat_z or ell.segment:
        raise DegenerateEllipse(f"ensemble oracle needs a full ellipse, got {ell.degeneracy.value}")
    if n < 64:
        raise ValueError("grid count must be at least 64")
    z_h, z_g = ell.z0 - ell.l3, ell.z0 + ell.l3
    if z_b < z_h - 1e-12 or z_b > z_g + 1e-12:
        raise DomainError(f"z_B={z_b} outside [{z_h}, {z_g}]")
    z_b = min(max(z_b, z_h), z_g)
    zs = z_h + (z_g - z_h) * np.arange(n + 1) / n
    zs[-1] = z_g
    xs = ell.l1 * np.sqrt(np.maximum(1.0 - ((zs - ell.z0) / ell.l3) ** 2, 0.0))
    ent = _kernels.entropy_bits(np.minimum(np.hypot(xs, zs), 1.0))

    hull = _kernels.lower_hull(zs, ent)
    hz = zs[hull]
    j = int(np.searchsorted(hz, z_b))
    if j < len(hull) and hz[j] == z_b:
        picks = [(1.0, hull[j])]
    else:
        j = min(max(j, 1), len(hull) - 1)
        lo, hi = hull[j - 1], hull[j]
        w_hi = (z_b - zs[lo]) / (zs[hi] - zs[lo])
        picks = [(1.0 - w_hi, lo), (w_hi, hi)]

    estimate = sum(w * ent[i] for w, i in picks)
    support = []
    for w, i in picks:
        if xs[i] > 0.0:
            support += [(0.5 * w, (float(xs[i]), float(zs[i]))), (0.5 * w, (-float(xs[i]), float(zs[i])))]
        else:
            support.append((w, (0.0, float(zs[i]))))
    return OracleResult(float(estimate), tuple(support), n)


def _planar_pair_entropy(state, theta):
    c, s = np.cos(theta), np.sin(theta)
    args = (state.z_A, state.z_B, state.txx, state.tzz)
    return _kernels.steer_entropy(*args, c, s) + _kernels.steer_entropy(*args, -c, -s)


def _sphere_pair_entropy(state, theta, phi):
    # full 3D steering; T_yy = 2(v-u) only enters off the x-z plane
    tyy = 2.0 * (state.v - state.u)
    total = 0.0
    for sign in (1.0, -1.0):
        nx = sign * np.sin(theta) * np.cos(phi)
        ny = sign * np.sin(theta) * np.sin(phi)
        nz = sign * np.cos(theta)
        den = 1.0 + nz * state.z_A
        ok = den > 1e-14
        dd = np.where(ok, den, 1.0)
        r = np.sqrt((state.txx * nx) ** 2 + (tyy * ny) ** 2 + (state.z_B + state.tzz * nz) ** 2) / dd
        total = total + np.where(ok, 0.5 * den * _kernels.entropy_bits(np.minimum(r, 1.0)), 0.0)
    return total


def vonneumann_oracle(state: XState, n: int = 10_000, full_sphere: bool = False, n_phi: int = 32) -> float:
    """Minimal conditional entropy over a grid of projective measurements on A.

    The planar sweep uses axes at polar angles pi j / n. With
    ``full_sphere`` the same polar grid is combined with ``n_phi`` azimuths
    in [0, pi); azimuth 0 reproduces the planar sweep.
    """
    theta = np.pi * np.arange(n) / n
    if not full_sphere:
        return float(_planar_pair_entropy(state, theta).min())
    phi = np.pi * np.arange(n_phi) / n_phi
    best = math.inf
    for p in phi:
        best = min(best, float(_sphere_pair_entropy(state, theta, p).min()))
    return best


# --- POVM searches ---------------------------------------------------------

def _triple_weights(th):
    """Completeness weights for three planar directions; rows of th are triples."""
    s, c = np.sin(th), np.cos(th)
    m1 = s[..., 1] * c[..., 2] - s[..., 2] * c[..., 1]
    m2 = s[..., 2] * c[..., 0] - s[..., 0] * c[..., 2]
    m3 = s[..., 0] * c[..., 1] - s[..., 1] * c[..., 0]
    det = m1 + m2 + m3
    with np.errstate(divide="ignore", invalid="ignore"):
        t = 2.0 * np.stack([m1, m2, m3], axis=-1) / det[..., None]
    return t


def _trapezoid_weights(th1, th2):
    """Weights of the symmetric pairs (+-th1), (+-th2); each pair element gets t_k."""
    c1, c2 = np.cos(th1), np.cos(th2)
    gap = c1 - c2
    flat = np.abs(gap) < 1e-15
    g = np.where(flat, 1.0, gap)
    t1 = np.where(flat, 0.5, -c2 / g)
    t2 = np.where(flat, 0.5, c1 / g)
    return t1, t2


def _energy(state):
    args = (state.z_A, state.z_B, state.txx, state.tzz)

    def e(theta):
        theta = np.asarray(theta, dtype=float)
        return _kernels.steer_entropy(*args, np.cos(theta), np.sin(theta))

    return e


def _search_three(state, resolution, starts):
    e = _energy(state)
    grid = 2.0 * np.pi * np.arange(resolution) / resolution
    eg = e(grid)
    idx = np.array(list(itertools.combinations(range(resolution), 3)))
    t = _triple_weights(grid[idx])
    feasible = np.all(np.isfinite(t), axis=1) & np.all(t >= -1e-12, axis=1)
    vals = np.where(feasible, np.sum(np.where(feasible[:, None], t, 0.0) * eg[idx], axis=1), np.inf)
    order = np.argsort(vals)[:starts]
    best = float(vals[order[0]])

    def objective(th):
        tt = _triple_weights(th[None, :])[0]
        if not np.all(np.isfinite(tt)) or tt.min() < -1e-12:
            return 10.0 + float(np.abs(np.minimum(tt, 0.0)).sum()) if np.all(np.isfinite(tt)) else 1e3
        return float(tt @ e(th))

    for k in order:
        if not np.isfinite(vals[k]):
            continue
        res = minimize(objective, grid[idx[k]], method="Nelder-Mead",
                       options={"xatol": 1e-11, "fatol": 1e-15, "maxiter": 4000})
        best = min(best, float(res.fun))
    return best


def _search_four(state, resolution, starts):
    # two mirrored pairs: one in the upper half (cos >= 0), one in the lower
    e = _energy(state)
    m = resolution // 2 + 1
    th1 = 0.5 * np.pi * np.arange(m) / (m - 1)
    th2 = 0.5 * np.pi + 0.5 * np.pi * np.arange(m) / (m - 1)
    T1, T2 = np.meshgrid(th1, th2, indexing="ij")
    t1, t2 = _trapezoid_weights(T1, T2)
    vals = 2.0 * t1 * e(T1) + 2.0 * t2 * e(T2)
    flat = np.argsort(vals, axis=None)[:starts]
    best = float(vals.flat[flat[0]])

    def objective(p):
        a = min(max(p[0], 0.0), 0.5 * np.pi)
        b = min(max(p[1], 0.5 * np.pi), np.pi)
        w1, w2 = _trapezoid_weights(np.array(a), np.array(b))
        return float(2.0 * w1 * e(a) + 2.0 * w2 * e(b))

    for k in flat:
        i, j = np.unravel_index(k, vals.shape)
        res = minimize(objective, [th1[i], th2[j]], method="Nelder-Mead",
                       options={"xatol": 1e-11, "fatol": 1e-15, "maxiter": 4000})
        best = min(best, float(res.fun))
    return best


def povm_oracle(state: XState, n_elements: int, resolution: int = 72, starts: int = 8) -> float:
    """Minimal conditional entropy found over planar rank-1 POVMs with 3 or 4 elements.

    Three elements: every triple of directions on a ``resolution`` grid,
    weights fixed by completeness (infeasible triples skipped), best
    ``starts`` polished with Nelder-Mead. Four elements: the mirrored
    trapezoid family -- pairs at +-theta1 above and +-theta2 below the
    equator, weights again fixed by completeness -- searched the same way.
    """
    if n_elements == 3:
        return _search_three(state, resolution, starts)
    if n_elements == 4:
        return _search_four(state, resolution, starts)
    raise ValueError(f"n_elements must be 3 or 4, got {n_elements}")
