"""Tests for solver configuration, initial data, IF-RK4 and Picard stepping, runs and studies"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from spectral.errors import PicardDivergence, SolverAbort, ValidationFailure
from spectral.fields import SpectralVectorField
from spectral.grid import Grid
from spectral.operators import gradient, to_spectral
from spectral.snapshot import read_snapshot
from rotation.propagators import LinearPropagator, coriolis_propagator
from diagnostics.series import read_diagnostics_csv
from solver.initial_data import beltrami, generate, random_solenoidal, taylor_green
from solver.integrators import IFRK4Integrator, check_cfl, step_ifrk4
from solver.nonlinear import nonlinear_term
from solver.picard import PicardSolver, picard_solve
from solver.runner import run
from solver.settings import SolverConfig
from solver.studies import delta_convergence_study, uniqueness_probe
from solver.trajectory import Trajectory


def small_config(**overrides) -> SolverConfig:
    """n=16 inviscid run of four steps"""
    values = dict(n=16, dt=5e-3, t_end=0.02, besov_stride=0)
    values.update(overrides)
    return SolverConfig(**values)


# ==================== Configuration ====================

class TestSolverConfig:
    def test_defaults(self):
        cfg = SolverConfig()
        assert (cfg.n, cfg.omega, cfg.delta, cfg.scheme) == (32, 0.0, 0.0, "ifrk4")

    @pytest.mark.parametrize("overrides", [{"n": 24}, {"delta": 1.0}, {"delta": -0.1}, {"dt": 0.0},
                                           {"scheme": "euler"}, {"unknown": 1}])
    def test_rejects(self, overrides):
        with pytest.raises(ValidationError):
            SolverConfig(**overrides)

    def test_step_sizes_reach_horizon(self):
        cfg = SolverConfig(dt=0.3, t_end=1.0)
        sizes = list(cfg.step_sizes())
        assert cfg.n_steps == 4
        assert sizes[:3] == [0.3, 0.3, 0.3]
        assert math.fsum(sizes) == pytest.approx(1.0, abs=1e-15)

    def test_exact_division(self):
        assert SolverConfig(dt=1e-3, t_end=1.0).n_steps == 1000

    def test_l_delta_t(self):
        assert SolverConfig(delta=0.0).l_delta_t() == math.inf
        assert SolverConfig(delta=0.25, t_end=1.0).l_delta_t() == pytest.approx(3.0)

    def test_contraction_number(self):
        cfg = SolverConfig(omega=2.0, delta=0.25, t_end=1.0)
        assert cfg.contraction_number(1.0, 0.1, 0.01, 1.0) == pytest.approx(2 * 0.1 * 2 + 8 * 0.01 * 3.0)


# ==================== Trajectory ====================

class TestTrajectory:
    def test_append_and_lookup(self, tg16):
        traj = Trajectory(small_config())
        traj.append(0.0, tg16)
        traj.append(0.01, tg16 * 2.0)
        assert len(traj) == 2
        assert traj.final_time == 0.01
        assert traj.state_at(0.01).energy() == pytest.approx(2.0 * tg16.energy())

    def test_times_must_increase(self, tg16):
        traj = Trajectory(small_config())
        traj.append(0.01, tg16)
        with pytest.raises(ValidationFailure, match="must increase"):
            traj.append(0.01, tg16)
        with pytest.raises(ValidationFailure, match="outside"):
            traj.append(1.0, tg16)

    def test_sup_difference(self, tg16):
        a, b = Trajectory(small_config()), Trajectory(small_config())
        for t, scale in ((0.0, 1.0), (0.01, 1.5)):
            a.append(t, tg16)
            b.append(t, tg16 * scale)
        assert a.sup_difference(b) == pytest.approx(0.5 * tg16.energy())
        with pytest.raises(ValidationFailure, match="no state"):
            a.state_at(0.005)


# ==================== Initial data ====================

class TestInitialData:
    def test_taylor_green_energy(self, grid32):
        u = generate(grid32, "taylor-green")
        assert u.energy() == pytest.approx(math.sqrt(2.0 * math.pi ** 3), rel=1e-12)
        assert u.divergence_residual() < 1e-14

    def test_normalization(self, grid16):
        assert taylor_green(grid16, l2=0.1).energy() == pytest.approx(0.1)
        assert random_solenoidal(grid16, seed=3, l2=2.0).energy() == pytest.approx(2.0)

    def test_random_is_seeded(self, grid16):
        a = generate(grid16, "random", {"seed": 9, "k0": 2.0})
        b = generate(grid16, "random", {"seed": 9, "k0": 2.0})
        c = generate(grid16, "random", {"seed": 10, "k0": 2.0})
        assert np.array_equal(a.coeffs, b.coeffs)
        assert not np.array_equal(a.coeffs, c.coeffs)

    def test_beltrami_is_curl_eigenfield(self, grid16):
        u = beltrami(grid16, modes=[(1, 0, 1), (0, 1, 1)], sign=-1)
        assert u.divergence_residual() < 1e-14

    def test_unknown_generator(self, grid16):
        with pytest.raises(ValidationFailure, match="unknown initial-data generator"):
            generate(grid16, "vortex-ring")
        with pytest.raises(ValidationFailure, match="at least one mode"):
            beltrami(grid16, modes=[])


# ==================== Nonlinear term and IF-RK4 ====================

class TestNonlinear:
    def test_beltrami_mode_has_no_nonlinearity(self, grid16):
        u = beltrami(grid16, modes=[(1, 0, 1)])
        assert nonlinear_term(u).energy() < 1e-12 * u.energy()

    def test_orthogonal_to_state(self, random16):
        n_u = nonlinear_term(random16)
        assert abs(n_u.inner(random16)) < 1e-12 * n_u.energy() * random16.energy()
        assert n_u.divergence_residual() < 1e-13

    def test_commutes_with_point_reflection(self, grid16):
        u = random_solenoidal(grid16, seed=8, k0=2.0, l2=1.0)
        reflected = nonlinear_term(u.reflect())
        expected = nonlinear_term(u).reflect()
        assert (reflected + expected).energy() <= 1e-12 * expected.energy()

    def test_requires_solenoidal_input(self, grid16):
        x, y, _ = grid16.mesh()
        grad = gradient(to_spectral(np.sin(x) * np.sin(y), grid16))
        with pytest.raises(ValidationFailure, match="not divergence-free"):
            nonlinear_term(grad)


class TestIFRK4:
    def test_linear_step_is_exact(self, random16):
        cfg = small_config(omega=40.0, delta=0.1, nonlinear=False)
        out = IFRK4Integrator(cfg).step(random16)
        expected = LinearPropagator(random16.grid, 40.0, 0.1, cfg.dt)(random16)
        assert np.abs(out.coeffs - expected.coeffs).max() < 1e-15

    def test_cfl_check(self, tg16):
        cfg = small_config(dt=0.5)
        with pytest.raises(ValidationFailure, match="CFL violation"):
            check_cfl(tg16, cfg)
        with pytest.raises(ValidationFailure, match="CFL violation"):
            step_ifrk4(tg16, cfg)

    def test_step_keeps_state_admissible(self, random16):
        out = step_ifrk4(random16, small_config(omega=3.0))
        assert out.divergence_residual() < 1e-13
        assert out.is_hermitian()
        assert not np.any(out.coeffs[:, ~random16.grid.dealias_mask])

    def test_viscous_energy_never_grows(self, tg16):
        cfg = SolverConfig(n=16, delta=0.01, dt=5e-3, t_end=0.1, besov_stride=0)
        energy = np.asarray(run(cfg, tg16).series.energy)
        assert len(energy) == 21
        assert np.all(np.diff(energy) <= 1e-14 * energy[0])
        assert energy[-1] < energy[0]

    def test_beltrami_is_inertial_wave(self, grid16):
        u0 = beltrami(grid16, modes=[(1, 0, 1)], sign=1)
        cfg = SolverConfig(n=16, omega=50.0, dt=1e-2, t_end=0.5, besov_stride=0)
        result = run(cfg, u0)
        exact = coriolis_propagator(u0, 50.0, 0.5)
        assert (result.trajectory.final - exact).energy() <= 1e-6 * u0.energy()

    @pytest.mark.slow
    def test_fourth_order_convergence(self, grid16):
        u0 = taylor_green(grid16, amplitude=3.0)
        base = dict(n=16, omega=5.0, t_end=0.256, besov_stride=0)
        reference = run(SolverConfig(dt=1.25e-4, **base), u0).trajectory.final
        dts = [4e-3, 2e-3, 1e-3]
        errors = [(run(SolverConfig(dt=dt, **base), u0).trajectory.final - reference).energy() for dt in dts]
        slope = np.polyfit(np.log(dts), np.log(errors), 1)[0]
        assert slope == pytest.approx(4.0, abs=0.3)

    @pytest.mark.slow
    def test_inviscid_energy_conservation(self, tg32):
        cfg = SolverConfig(n=32, omega=0.0, delta=0.0, dt=1e-3, t_end=1.0, besov_stride=0)
        result = run(cfg, tg32)
        assert result.completed
        assert result.energy_drift <= 1e-8


# ==================== Runs ====================

class TestRun:
    def test_artifacts(self, tmp_path, tg16):
        cfg = small_config(snapshot_stride=2, besov_stride=1)
        result = run(cfg, tg16, run_dir=tmp_path)
        assert result.completed
        assert len(result.series) == 5
        assert result.final_time == pytest.approx(0.02)
        for name in ("diagnostics.csv", "report.txt", "run.log"):
            assert (tmp_path / name).exists()
        snaps = sorted(p.name for p in (tmp_path / "snapshots").iterdir())
        assert snaps == ["step_000000.bin", "step_000002.bin", "step_000004.bin"]
        series = read_diagnostics_csv(tmp_path / "diagnostics.csv")
        assert series.energy == result.series.energy
        assert np.isfinite(series.besov["besov_5_2"]).all()

    def test_projects_inadmissible_data(self, grid16, tg16):
        x, y, _ = grid16.mesh()
        polluted = tg16 + gradient(to_spectral(0.1 * np.sin(x) * np.sin(y), grid16))
        result = run(small_config(), polluted)
        assert result.max_divergence < 1e-12

    def test_grid_mismatch(self, tg32):
        with pytest.raises(ValidationFailure, match="config expects"):
            run(small_config(), tg32)

    def test_cfl_abort_keeps_partial_artifacts(self, tmp_path, tg16):
        with pytest.raises(SolverAbort, match="CFL violation") as info:
            run(small_config(cfl_max=1e-6), tg16, run_dir=tmp_path)
        partial = info.value.partial
        assert partial is not None and not partial.completed
        assert len(partial.series) == 1
        field, time = read_snapshot(tmp_path / "snapshots" / "last_good.bin")
        assert time == 0.0
        assert np.allclose(field.coeffs, tg16.coeffs)
        assert "status: aborted" in (tmp_path / "report.txt").read_text()

    def test_bkm_guard(self, tg16):
        with pytest.raises(SolverAbort, match="BKM guard") as info:
            run(small_config(bkm_ceiling=1e-9), tg16)
        assert info.value.time == pytest.approx(5e-3)
        assert len(info.value.partial.series) == 2

    def test_trajectory_stride(self, tg16):
        result = run(small_config(), tg16, keep_every=2)
        assert result.trajectory.times == pytest.approx([0.0, 0.01, 0.02])


# ==================== Picard mode ====================

class TestPicard:
    def test_needs_viscosity(self):
        with pytest.raises(ValidationFailure, match="delta > 0"):
            PicardSolver(SolverConfig(n=16, delta=0.0, scheme="picard"))

    def test_needs_whole_number_of_steps(self):
        with pytest.raises(ValidationFailure, match="whole number"):
            PicardSolver(SolverConfig(n=16, delta=0.1, dt=0.03, t_end=0.1))

    def test_agrees_with_ifrk4(self, grid16):
        u0 = taylor_green(grid16, l2=0.1)
        cfg = SolverConfig(n=16, omega=1.0, delta=0.05, dt=0.01, t_end=0.1, besov_stride=0)
        solution = picard_solve(u0, cfg, tol=1e-12, max_iter=60)
        reference = run(cfg, u0).trajectory.final
        gap = (solution.trajectory.final - reference).energy()
        assert gap <= 1e-3 * reference.energy()
        assert len(solution.trajectory) == 11
        assert all(f < 1.0 for f in solution.contraction_factors)

    def test_small_data_contracts_strongly(self, grid16):
        u0 = taylor_green(grid16, l2=1e-3)
        cfg = SolverConfig(n=16, omega=1.0, delta=0.05, dt=0.01, t_end=0.1, besov_stride=0)
        solution = picard_solve(u0, cfg, tol=1e-14, max_iter=60)
        factors = solution.contraction_factors
        assert len(factors) >= 2
        assert all(f < 0.5 for f in factors)

    def test_frozen_guess_reaches_the_same_fixed_point(self, grid16):
        u0 = taylor_green(grid16, l2=1e-3)
        cfg = SolverConfig(n=16, omega=1.0, delta=0.05, dt=0.01, t_end=0.05)
        tol = 1e-12
        heat = picard_solve(u0, cfg, tol=tol)
        frozen = picard_solve(u0, cfg, tol=tol, initial_guess="frozen")
        assert heat.trajectory.sup_difference(frozen.trajectory) < 10.0 * tol

    def test_divergence_reported(self, grid16):
        u0 = taylor_green(grid16, l2=50.0)
        cfg = SolverConfig(n=16, omega=1.0, delta=0.05, dt=0.01, t_end=0.1)
        with pytest.raises(PicardDivergence, match="did not converge") as info:
            picard_solve(u0, cfg, tol=1e-12, max_iter=5)
        assert 1 <= len(info.value.iterations) <= 5
        assert info.value.iterations[0]["iteration"] == 1

    def test_runner_dispatches_picard(self, grid16):
        u0 = taylor_green(grid16, l2=0.1)
        cfg = SolverConfig(n=16, delta=0.05, dt=0.01, t_end=0.05, scheme="picard", picard_tol=1e-12,
                           besov_stride=0)
        result = run(cfg, u0)
        assert result.completed
        assert len(result.series) == 6
        assert result.series.energy[-1] < result.series.energy[0]


# ==================== Studies ====================

class TestStudies:
    def test_delta_gaps_shrink(self, grid16):
        u0 = random_solenoidal(grid16, seed=7, k0=2.0, l2=0.5)
        cfg = SolverConfig(n=16, omega=10.0, dt=5e-3, t_end=0.05, besov_stride=0)
        study = delta_convergence_study(u0, [0.1, 0.05, 0.025], cfg)
        assert list(study.frame.columns) == ["delta", "gap"]
        assert study.gaps_monotone()
        assert 0.8 < study.slope < 1.2

    def test_unit_ratio_gives_zero_gaps(self, grid16, tg16):
        study = delta_convergence_study(tg16, [0.1], small_config(), ratio=1.0)
        assert study.frame["gap"].tolist() == [0.0]
        assert math.isnan(study.slope)

    @pytest.mark.parametrize("deltas, message", [([], "empty"), ([0.05, 0.1], "strictly decreasing"),
                                                 ([1.0], r"\(0, 1\)")])
    def test_delta_list_validation(self, tg16, deltas, message):
        with pytest.raises(ValidationFailure, match=message):
            delta_convergence_study(tg16, deltas, small_config())

    def test_uniqueness_probe_within_envelope(self, random16):
        report = uniqueness_probe(random16, small_config(omega=5.0), 1e-6, seed=11)
        assert report.within_envelope
        assert report.growth[0] == pytest.approx(1.0)
        assert 0.0 <= report.fitted_c <= 3.0
        assert list(report.to_frame().columns) == ["t", "difference", "growth", "U", "envelope"]

    def test_uniqueness_difference_is_linear_in_perturbation(self, random16):
        cfg = small_config(omega=5.0)
        full = uniqueness_probe(random16, cfg, 1e-6, seed=11)
        half = uniqueness_probe(random16, cfg, 5e-7, seed=11)
        assert np.all(half.difference > 0.0)
        assert np.allclose(full.difference / half.difference, 2.0, rtol=0.05)

    def test_uniqueness_zero_perturbation(self, random16):
        report = uniqueness_probe(random16, small_config(), 0.0)
        assert np.all(report.difference == 0.0)
        assert report.max_growth == 0.0
        with pytest.raises(ValidationFailure, match="nonnegative"):
            uniqueness_probe(random16, small_config(), -1.0)


def test_grid_from_config():
    assert SolverConfig(n=16, box_size=4.0).grid() == Grid(16, 4.0)
    assert isinstance(SpectralVectorField.zeros(Grid(16)), SpectralVectorField)
