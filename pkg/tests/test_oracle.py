import numpy as np
import pytest
from scipy.optimize import linprog

import xdiscord as xd
from xdiscord import _kernels
from xdiscord.errors import DegenerateEllipse, DomainError
from xdiscord.oracle import ensemble_oracle, povm_oracle, random_xstates, vonneumann_oracle

from conftest import family_state


def lp_minimum(state, m=720):
    """Best planar rank-1 POVM over m fixed directions, any number of elements."""
    th = 2 * np.pi * np.arange(m) / m
    e = _kernels.steer_entropy(state.z_A, state.z_B, state.txx, state.tzz, np.cos(th), np.sin(th))
    a_eq = np.vstack([np.ones(m), np.sin(th), np.cos(th)])
    res = linprog(e, A_eq=a_eq, b_eq=[2.0, 0.0, 0.0], bounds=(0, None), method="highs")
    assert res.success
    return res.fun, int(np.count_nonzero(res.x > 1e-12))


class TestRandomStates:
    def test_seeded(self):
        a = random_xstates(5, 42)
        b = random_xstates(5, 42)
        assert a == b
        assert a != random_xstates(5, 43)

    def test_valid(self):
        for s in random_xstates(200, 1):
            assert s.a + s.b + s.c + s.d == pytest.approx(1.0)
            assert s.u**2 <= s.a * s.d + 1e-15 and s.v**2 <= s.b * s.c + 1e-15


class TestEnsemble:
    def test_bell_circle(self, bell):
        ell = xd.ellipse_from_xstate(bell)
        assert ensemble_oracle(ell, 0.0).s_bar_min_estimate == pytest.approx(0.0, abs=1e-12)

    def test_concave_family_uses_vertices(self):
        s = family_state(0.2805)
        ell = xd.ellipse_from_xstate(s)
        res = ensemble_oracle(ell, s.z_B, 4096)
        assert res.support_z == pytest.approx((ell.z_H, ell.z_G), abs=1e-14)
        curve = xd.EntropyCurve.from_ellipse(ell)
        assert res.s_bar_min_estimate == pytest.approx(xd.s_vertical(curve, s.z_B), abs=1e-6)

    def test_triangle_family(self):
        s = family_state(0.2822)
        ell = xd.ellipse_from_xstate(s)
        dec = xd.optimal_decomposition(s)
        res = ensemble_oracle(ell, s.z_B, 4096)
        assert res.s_bar_min_estimate == pytest.approx(dec.s_bar_min, abs=2e-3)
        span = ell.z_G - ell.z_H
        lo, hi = res.support_z
        assert lo == pytest.approx(dec.z_star, abs=2 * span / 4096)
        assert hi == pytest.approx(ell.z_G, abs=2 * span / 4096)

    def test_support_is_an_ensemble_of_the_reduced_point(self):
        s = family_state(0.2822)
        res = ensemble_oracle(xd.ellipse_from_xstate(s), s.z_B)
        assert sum(w for w, _ in res.support) == pytest.approx(1.0)
        assert sum(w * p[1] for w, p in res.support) == pytest.approx(s.z_B, abs=1e-14)
        assert sum(w * p[0] for w, p in res.support) == pytest.approx(0.0, abs=1e-14)

    def test_refinement_is_monotone_and_converges(self):
        for s in [family_state(0.2822), family_state(0.2839)] + random_xstates(20, 6):
            ell = xd.ellipse_from_xstate(s)
            if ell.flat_z or ell.segment:
                continue
            est = [ensemble_oracle(ell, s.z_B, 64 * 2**j).s_bar_min_estimate for j in range(8)]
            # nested grids: a finer hull can only go down
            assert all(b <= a + 1e-15 for a, b in zip(est, est[1:]))
            sbar = xd.optimal_decomposition(s).s_bar_min
            assert est[-1] >= sbar - 1e-12
            assert est[-1] - sbar <= 1e-5

    def test_errors(self):
        diag = xd.ellipse_from_xstate(xd.validate_xstate(0.4, 0.3, 0.2, 0.1, 0, 0))
        with pytest.raises(DegenerateEllipse):
            ensemble_oracle(diag, diag.z_B)
        ell = xd.ellipse_from_xstate(family_state(0.2822))
        with pytest.raises(ValueError):
            ensemble_oracle(ell, ell.z_B, 10)
        with pytest.raises(DomainError):
            ensemble_oracle(ell, 0.95)


class TestVonNeumann:
    def test_bell(self, bell):
        assert vonneumann_oracle(bell, 1000) == pytest.approx(0.0, abs=1e-12)

    def test_horizontal_state_matches(self):
        s = family_state(0.2839)
        assert xd.quantum_discord(s).kind is xd.Kind.HORIZONTAL
        assert vonneumann_oracle(s) == pytest.approx(xd.optimal_decomposition(s).s_bar_min, abs=1e-6)

    def test_lu_state_margin(self, lu_state):
        sbar = xd.optimal_decomposition(lu_state).s_bar_min
        assert vonneumann_oracle(lu_state) - sbar > 1e-5

    def test_full_sphere_adds_nothing(self):
        states = random_xstates(25, 8) + [family_state(0.2822)]
        for s in states:
            planar = vonneumann_oracle(s, 2000)
            full = vonneumann_oracle(s, 2000, full_sphere=True, n_phi=16)
            assert full <= planar + 1e-15
            assert abs(full - planar) < 1e-7


class TestPovmSearch:
    def test_mixed(self, mixed):
        for n in (3, 4):
            assert povm_oracle(mixed, n, resolution=24, starts=2) == pytest.approx(1.0)

    def test_three_finds_triangle(self, lu_state):
        sbar = xd.optimal_decomposition(lu_state).s_bar_min
        assert povm_oracle(lu_state, 3) <= sbar + 1e-6
        assert povm_oracle(lu_state, 3) == pytest.approx(sbar, abs=1e-9)

    def test_four_never_beats_three(self):
        for s in random_xstates(10, 4) + [family_state(0.2822)]:
            assert povm_oracle(s, 4) >= povm_oracle(s, 3) - 1e-6

    def test_bad_size(self, lu_state):
        with pytest.raises(ValueError):
            povm_oracle(lu_state, 5)


class TestLinearProgram:
    def test_lp_never_beats_geometry(self, lu_state):
        sizes = set()
        for s in random_xstates(50, 13) + [lu_state, family_state(0.2822)]:
            best, k = lp_minimum(s)
            sbar = xd.optimal_decomposition(s).s_bar_min
            assert best >= sbar - 1e-12
            assert best - sbar <= 1e-6
            sizes.add(k)
        # optimal vertices of the program have at most three elements
        assert max(sizes) <= 3
