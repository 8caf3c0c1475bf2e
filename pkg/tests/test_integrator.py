"""Tests for the integrating-factor RK4 solver and its exact companions."""

import numpy as np
import pytest

from torusnls.grid import GridSpec, field_from_modes, l2_norm, random_field
from torusnls.integrator import (
    CUBIC_NLS,
    LIMIT_PDE,
    IntegrationError,
    SolverConfig,
    Trajectory,
    free_evolution,
    gauge,
    load_trajectory,
    plane_wave_solution,
    save_trajectory,
    solve,
    step,
)

GRID = GridSpec(128)


def five_mode(grid=GRID):
    return field_from_modes(grid, {-3: 0.3 + 0.1j, -1: -0.2j, 0: 0.5,
                                   2: 0.4 - 0.3j, 5: 0.1})


def cubic_cfg(dt=1e-3, t_end=1.0, gamma=1.0, record_every=1000, grid=GRID):
    return SolverConfig(equation=CUBIC_NLS, gamma=gamma, grid=grid, dt=dt,
                        t_end=t_end, record_every=record_every)


class TestConfig:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            cubic_cfg(dt=0.02)
        with pytest.raises(ValueError):
            cubic_cfg(gamma=0.0)
        with pytest.raises(ValueError):
            cubic_cfg(dt=3e-4, t_end=1.0)  # dt does not divide t_end
        with pytest.raises(ValueError):
            SolverConfig(equation="nls", gamma=1.0, grid=GRID, dt=1e-3, t_end=1.0)
        with pytest.raises(ValueError):
            cubic_cfg(record_every=0)


class TestFreeEvolution:
    def test_constant_unchanged(self):
        u = field_from_modes(GRID, {0: 2.0 - 1j})
        out = free_evolution(u, 0.37)
        assert np.allclose(out.coeffs, u.coeffs)

    def test_single_mode_phase(self):
        n, t = 5, 0.9
        u = field_from_modes(GRID, {n: 1.0})
        assert free_evolution(u, t).coeff(n) == pytest.approx(np.exp(-1j * n * n * t))

    def test_group_law(self):
        u = random_field(GRID, 3)
        a = free_evolution(free_evolution(u, 0.3), 0.45)
        b = free_evolution(u, 0.75)
        assert np.max(np.abs(a.coeffs - b.coeffs)) < 1e-12


class TestStep:
    def test_zero_forcing_reduces_to_free_group(self):
        cfg = cubic_cfg(dt=1e-3)
        u = five_mode()
        linear = step(u, cfg, forcing=lambda c: np.zeros_like(c))
        exact = free_evolution(u, cfg.dt)
        assert np.max(np.abs(linear.coeffs - exact.coeffs)) < 1e-12

    def test_self_convergence_order(self):
        # halving dt must shrink the self-difference by at least 2^3.5
        u = five_mode()
        finals = {}
        for dt in (8e-3, 4e-3, 2e-3):
            cfg = cubic_cfg(dt=dt, t_end=0.4, record_every=int(round(0.4 / dt)))
            finals[dt] = solve(u, cfg).states[-1]
        d1 = l2_norm(finals[8e-3] - finals[4e-3])
        d2 = l2_norm(finals[4e-3] - finals[2e-3])
        assert d1 / d2 >= 2 ** 3.5

    def test_instability_raises(self):
        big = field_from_modes(GRID, {0: 60.0, 1: 50.0})
        cfg = cubic_cfg(dt=0.01, t_end=1.0, gamma=1.0, record_every=1)
        with pytest.raises(IntegrationError):
            solve(big, cfg)


class TestSolve:
    @pytest.mark.parametrize("n,alpha,gamma", [(0, 0.5, 1.0), (1, 1.0, -1.0),
                                               (3, 1.0, 1.0), (8, 0.5, -1.0)])
    def test_plane_wave_global(self, n, alpha, gamma):
        u0 = field_from_modes(GRID, {n: alpha})
        cfg = cubic_cfg(gamma=gamma, record_every=250)
        traj = solve(u0, cfg)
        for t, state in zip(traj.times, traj.states):
            exact = plane_wave_solution(GRID, n, alpha, gamma, t)
            assert l2_norm(state - exact) / l2_norm(exact) <= 1e-6

    def test_zero_data(self):
        z = field_from_modes(GRID, {})
        traj = solve(z, cubic_cfg(t_end=0.1, record_every=10))
        assert all(l2_norm(s) == 0.0 for s in traj.states)

    def test_l2_conservation_both_equations(self):
        u0 = random_field(GRID, 21)
        u0 = (1.0 / l2_norm(u0)) * u0
        for eq, a2 in ((CUBIC_NLS, 0.0), (LIMIT_PDE, 1.7)):
            cfg = SolverConfig(equation=eq, gamma=1.0, grid=GRID, dt=1e-3,
                               t_end=1.0, alpha_sq=a2, record_every=100)
            traj = solve(u0, cfg)
            m0 = l2_norm(traj.states[0])
            drift = max(abs(l2_norm(s) - m0) / m0 for s in traj.states)
            assert drift <= 1e-7

    def test_cross_solver_consistency(self):
        # with alpha_sq = ||u0||^2 the limit equation IS the cubic equation
        u0 = random_field(GRID, 33)
        a2 = l2_norm(u0) ** 2
        lim = SolverConfig(equation=LIMIT_PDE, gamma=1.0, grid=GRID, dt=1e-3,
                           t_end=1.0, alpha_sq=a2, record_every=1000)
        cub = cubic_cfg()
        d = l2_norm(solve(u0, lim).states[-1] - solve(u0, cub).states[-1])
        assert d <= 1e-6

    def test_time_reversal(self):
        # conj(u)(t) solves the same equation backwards
        u0 = five_mode()
        cfg = cubic_cfg()
        fwd = solve(u0, cfg).states[-1]
        back = solve(fwd.conj(), cfg).states[-1].conj()
        assert l2_norm(back - u0) <= 1e-6

    def test_trajectory_invariants(self):
        traj = solve(five_mode(), cubic_cfg(t_end=0.2, record_every=50))
        assert len(traj.times) == len(traj.states)
        assert traj.times[0] == 0.0
        assert np.all(np.diff(traj.times) > 0)


class TestGauge:
    def test_zero_rate_identity(self):
        traj = solve(five_mode(), cubic_cfg(t_end=0.1, record_every=50))
        same = gauge(traj, 0.0)
        for a, b in zip(traj.states, same.states):
            assert np.allclose(a.coeffs, b.coeffs)

    def test_preserves_l2(self):
        traj = solve(five_mode(), cubic_cfg(t_end=0.1, record_every=50))
        gauged = gauge(traj, 2.7)
        for a, b in zip(traj.states, gauged.states):
            assert l2_norm(a) == pytest.approx(l2_norm(b), rel=1e-14)

    def test_limit_plus_gauge_matches_cubic(self):
        u0 = random_field(GRID, 55)
        u0 = (1.0 / l2_norm(u0)) * u0
        gamma, theta_sq = 1.0, 0.7
        mass = l2_norm(u0) ** 2
        a2 = mass + 2 * np.pi * theta_sq
        lim_cfg = SolverConfig(equation=LIMIT_PDE, gamma=gamma, grid=GRID,
                               dt=1e-3, t_end=1.0, alpha_sq=a2, record_every=200)
        v = gauge(solve(u0, lim_cfg), -gamma / np.pi * (a2 - mass))
        u = solve(u0, cubic_cfg(record_every=200))
        worst = max(l2_norm(a - b) for a, b in zip(v.states, u.states))
        assert worst <= 1e-5


class TestSerialization:
    def test_round_trip(self, tmp_path):
        cfg = cubic_cfg(t_end=0.05, record_every=10, grid=GridSpec(32))
        traj = solve(random_field(GridSpec(32), 5), cfg)
        path = tmp_path / "traj.csv"
        save_trajectory(traj, path)
        loaded = load_trajectory(path)
        assert np.allclose(loaded.times, traj.times)
        assert loaded.config == cfg
        for a, b in zip(loaded.states, traj.states):
            assert np.max(np.abs(a.coeffs - b.coeffs)) == 0.0
