"""Tests for diagnostics series, Gronwall fits, rotation sweeps and the Strichartz harness"""

import math

import numpy as np
import pandas as pd
import pytest

from spectral.errors import ArtifactError, ValidationFailure
from spectral.grid import Grid
from spectral.operators import to_spectral
from diagnostics.series import (
    DiagnosticsSeries,
    bkm_update,
    concatenate,
    fit_gronwall_constants,
    gronwall_envelope,
    read_diagnostics_csv,
    time_lr_norm,
)
from diagnostics.strichartz import (
    default_decay_experiment,
    gaussian_packet,
    phase_grid,
    strichartz_decay,
    validate_decay_inputs,
)
from diagnostics.sweep import RotationSweepResult, SweepRow, rotation_sweep
from solver.runner import run
from solver.settings import SolverConfig

OMEGAS = [10.0, 30.0, 100.0, 300.0, 1000.0]


def _manual_series(values):
    """Series over t = 0, 1, 2 with a constant besov_inf_1 column"""
    return DiagnosticsSeries(
        times=[0.0, 1.0, 2.0],
        energy=[1.0, 1.0, 1.0],
        grad_sup=[1.0, 1.0, 1.0],
        U=[0.0, 1.0, 2.0],
        besov={"besov_inf_1": list(values)},
    )


@pytest.fixture
def written_series(tmp_path, tg16, partition16):
    series = DiagnosticsSeries()
    series.sample(0.0, tg16, partition16)
    series.sample(0.5, tg16 * 0.5, partition16, with_besov=False)
    series.sample(1.0, tg16 * 0.25, partition16)
    return series, series.write_csv(tmp_path / "diagnostics.csv")


# ==================== Series ====================

class TestSeries:
    def test_bkm_trapezoid(self, tg32):
        series = DiagnosticsSeries()
        bkm_update(series, 0.0, tg32)
        bkm_update(series, 0.5, tg32)
        bkm_update(series, 1.0, tg32 * 3.0)
        assert series.grad_sup == pytest.approx([1.0, 1.0, 3.0])
        assert series.U == pytest.approx([0.0, 0.5, 1.5])
        assert series.final_U == pytest.approx(1.5)

    def test_times_must_increase(self, tg16):
        series = DiagnosticsSeries()
        bkm_update(series, 0.1, tg16)
        with pytest.raises(ValidationFailure, match="must increase"):
            bkm_update(series, 0.1, tg16)

    def test_besov_sampled_on_request(self, written_series):
        series, _ = written_series
        assert len(series) == 3
        column = series.series("besov_5_2")
        assert np.isfinite(column[0]) and math.isnan(column[1]) and np.isfinite(column[2])
        assert column[2] == pytest.approx(0.25 * column[0])

    def test_energy_drift_and_crossing(self, written_series):
        series, _ = written_series
        assert series.energy_drift() == pytest.approx(0.75)
        assert series.first_crossing(0.2) == 0.5
        assert series.first_crossing(100.0) is None

    def test_unknown_column(self):
        with pytest.raises(ValidationFailure, match="unknown diagnostics column"):
            DiagnosticsSeries().series("vorticity")

    def test_concatenate_offsets_U(self):
        first = _manual_series([1.0, 1.0, 1.0])
        second = DiagnosticsSeries(times=[2.0, 3.0], energy=[1.0, 1.0], grad_sup=[1.0, 1.0], U=[0.0, 1.0])
        joined = concatenate(first, second)
        assert joined.times == [0.0, 1.0, 2.0, 3.0]
        assert joined.U == [0.0, 1.0, 2.0, 3.0]
        with pytest.raises(ValidationFailure, match="continuation"):
            concatenate(first, DiagnosticsSeries(times=[5.0], energy=[1.0], grad_sup=[1.0], U=[0.0]))


class TestTimeNorms:
    def test_constant_column(self):
        series = _manual_series([2.0, 2.0, 2.0])
        assert time_lr_norm(series, "besov_inf_1", 4.0) == pytest.approx(32.0 ** 0.25)
        assert time_lr_norm(series, "besov_inf_1", math.inf) == 2.0

    def test_skips_unsampled_rows(self):
        series = _manual_series([2.0, math.nan, 2.0])
        assert time_lr_norm(series, "besov_inf_1", 1.0) == pytest.approx(4.0)

    def test_exponent_below_one(self):
        with pytest.raises(ValidationFailure, match=">= 1"):
            time_lr_norm(_manual_series([1.0, 1.0, 1.0]), "besov_inf_1", 0.5)


# ==================== CSV ====================

class TestDiagnosticsCsv:
    def test_round_trip(self, written_series):
        series, path = written_series
        back = read_diagnostics_csv(path)
        assert back.times == series.times
        assert back.U == series.U
        assert math.isnan(back.besov["besov_5_2"][1])
        assert back.besov["hom_besov_5_2"][2] == series.besov["hom_besov_5_2"][2]

    def test_non_numeric_cell(self, written_series):
        _, path = written_series
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        frame.loc[1, "energy"] = "abc"
        frame.to_csv(path, index=False)
        with pytest.raises(ArtifactError, match="row 3"):
            read_diagnostics_csv(path)

    def test_nan_in_base_column(self, written_series):
        _, path = written_series
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        frame.loc[0, "U"] = "nan"
        frame.to_csv(path, index=False)
        with pytest.raises(ArtifactError, match="row 2: column 'U' is NaN"):
            read_diagnostics_csv(path)

    def test_time_must_increase(self, written_series):
        _, path = written_series
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        frame.loc[2, "t"] = "0.25"
        frame.to_csv(path, index=False)
        with pytest.raises(ArtifactError, match="row 4: time"):
            read_diagnostics_csv(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "diagnostics.csv"
        path.write_text("t,energy,grad_sup,U\n")
        with pytest.raises(ArtifactError, match="no samples"):
            read_diagnostics_csv(path)

    def test_missing_column_and_file(self, tmp_path):
        path = tmp_path / "diagnostics.csv"
        path.write_text("t,energy\n0,1\n")
        with pytest.raises(ArtifactError, match="columns missing: grad_sup, U"):
            read_diagnostics_csv(path)
        with pytest.raises(ArtifactError, match="does not exist"):
            read_diagnostics_csv(tmp_path / "absent.csv")


# ==================== Gronwall ====================

class TestGronwall:
    def test_fit_envelope_holds(self, tg16):
        cfg = SolverConfig(n=16, dt=5e-3, t_end=0.05, besov_stride=2)
        result = run(cfg, tg16)
        first = result.series.series("besov_5_2")[0]
        fit = fit_gronwall_constants(result.series, first)
        assert fit.c3 == pytest.approx(1.0)
        assert fit.c4 >= 0.0
        assert fit.holds()
        envelope = gronwall_envelope(result.series, first, fit.c3, fit.c4)
        assert envelope.shape == (len(result.series),)

    def test_rejects_bad_constants(self, written_series):
        series, _ = written_series
        with pytest.raises(ValidationFailure, match="c3 > 0"):
            gronwall_envelope(series, 1.0, 0.0, 1.0)
        with pytest.raises(ValidationFailure, match="nonzero initial norm"):
            fit_gronwall_constants(series, 0.0)

    def test_needs_sampled_column(self, tg16):
        series = DiagnosticsSeries()
        series.sample(0.0, tg16)
        with pytest.raises(ValidationFailure, match="never sampled"):
            fit_gronwall_constants(series, 1.0)


# ==================== Rotation sweep ====================

def _row(omega, U_end, flagged=False):
    return SweepRow(omega=omega, t_hit=1.0, U_end=U_end, lr_norm_b1inf=1.0, max_besov_5_2=1.0, flagged=flagged)


class TestRotationSweep:
    def test_suppression_logic(self):
        assert RotationSweepResult([_row(0.0, 2.0), _row(10.0, 1.5), _row(100.0, 1.0)], 5.0, 4.0).suppression_holds()
        assert not RotationSweepResult([_row(0.0, 2.0), _row(10.0, 2.5)], 5.0, 4.0).suppression_holds()
        rising = RotationSweepResult([_row(0.0, 2.0), _row(10.0, 1.0), _row(100.0, 1.5)], 5.0, 4.0)
        assert not rising.suppression_holds()
        assert rising.suppression_holds(noise=0.6)

    def test_small_sweep(self, tmp_path, tg16):
        cfg = SolverConfig(n=16, dt=5e-3, t_end=0.02, besov_stride=1)
        sweep = rotation_sweep(tg16, [100.0, 10.0], cfg, u_threshold=1e-3, run_root=tmp_path)
        assert [row.omega for row in sweep.rows] == [0.0, 10.0, 100.0]
        assert not sweep.flagged
        for name in ("omega_0", "omega_10", "omega_100"):
            assert (tmp_path / name / "diagnostics.csv").exists()
        assert all(row.t_hit < cfg.t_end for row in sweep.rows)
        frame = pd.read_csv(sweep.write_csv(tmp_path / "sweep_summary.csv"))
        assert list(frame.columns) == ["omega", "t_hit", "U_end", "lr_norm_b1inf", "max_besov_5_2", "flagged"]
        assert frame[["U_end", "lr_norm_b1inf", "max_besov_5_2"]].notna().all().all()

    def test_threaded_matches_serial(self, tg16):
        cfg = SolverConfig(n=16, dt=5e-3, t_end=0.02, besov_stride=0)
        serial = rotation_sweep(tg16, [10.0, 100.0], cfg, u_threshold=5.0)
        pooled = rotation_sweep(tg16, [10.0, 100.0], cfg, u_threshold=5.0, threads=3)
        assert [r.U_end for r in serial.rows] == [r.U_end for r in pooled.rows]
        assert all(row.t_hit == cfg.t_end for row in serial.rows)

    def test_aborted_rows_are_flagged(self, tg16):
        cfg = SolverConfig(n=16, dt=5e-3, t_end=0.02, besov_stride=0, cfl_max=1e-6)
        sweep = rotation_sweep(tg16, [10.0], cfg, u_threshold=5.0)
        assert len(sweep.flagged) == 2
        assert all("CFL" in row.reason for row in sweep.flagged)
        assert not sweep.suppression_holds()

    def test_rotation_sign_does_not_matter(self, tg16):
        cfg = SolverConfig(n=16, dt=5e-3, t_end=0.02, besov_stride=0)
        positive = rotation_sweep(tg16, [10.0], cfg, u_threshold=5.0)
        negative = rotation_sweep(tg16, [-10.0], cfg, u_threshold=5.0)
        assert [row.omega for row in negative.rows] == [0.0, -10.0]
        assert negative.baseline.U_end == positive.baseline.U_end
        assert negative.row(-10.0).U_end == pytest.approx(positive.row(10.0).U_end, rel=1e-10)

    @pytest.mark.slow
    def test_taylor_green_rotation_suppression(self, tg32):
        cfg = SolverConfig(n=32, dt=1e-3, t_end=1.0, besov_stride=10)
        sweep = rotation_sweep(tg32, [100.0, 500.0], cfg, u_threshold=5.0)
        assert not sweep.flagged
        u_end = [sweep.row(omega).U_end for omega in (0.0, 100.0, 500.0)]
        assert u_end[0] > u_end[1] > u_end[2]
        assert sweep.suppression_holds()
        frame = sweep.to_frame()
        assert np.isfinite(frame[["t_hit", "U_end", "lr_norm_b1inf", "max_besov_5_2"]].to_numpy(dtype=float)).all()
        ratio = sweep.row(500.0).max_besov_5_2 / sweep.baseline.max_besov_5_2
        assert 0.5 <= ratio <= 2.0


# ==================== Strichartz ====================

class TestStrichartz:
    @pytest.mark.parametrize("omegas, r, message", [
        ([10.0, 100.0, 1000.0], 4.0, "at least 4"),
        ([10.0, 20.0, 40.0, 80.0], 4.0, "two decades|2 decades"),
        ([0.0, 10.0, 100.0, 1000.0], 4.0, "nonzero"),
        (OMEGAS, 2.0, "2 < r < inf"),
    ])
    def test_input_validation(self, omegas, r, message):
        with pytest.raises(ValidationFailure, match=message):
            validate_decay_inputs(omegas, r)

    def test_signs_are_dropped(self):
        assert list(validate_decay_inputs([-10.0, 30.0, -100.0, 1000.0], 4.0)) == [10.0, 30.0, 100.0, 1000.0]

    def test_phase_grid(self):
        nodes = phase_grid(500.0, [0.123, 500.0])
        assert nodes[0] == 0.0 and nodes[-1] == 500.0
        assert 0.123 in nodes
        assert np.all(np.diff(nodes) > 0.0)

    def test_degenerate_data(self, grid16):
        x = grid16.mesh()[0]
        f = to_spectral(np.cos(2.0 * x), grid16)
        with pytest.raises(ValidationFailure, match="degenerate"):
            strichartz_decay(f, OMEGAS)

    def test_zero_data(self, grid16):
        with pytest.raises(ValidationFailure, match="identically zero"):
            strichartz_decay(to_spectral(np.zeros(grid16.shape), grid16), OMEGAS)

    def test_small_packet_report(self, tmp_path):
        grid = Grid(16)
        report = strichartz_decay(gaussian_packet(grid, 2), OMEGAS, r=4.0, j=2, t_end=1.0)
        assert report.j == 2
        assert report.expected_slope == -0.25
        assert np.all(report.M > 0.0) and np.isfinite(report.slope)
        assert report.slope_error() == pytest.approx(abs(report.slope + 0.25))
        frame = pd.read_csv(report.write_csv(tmp_path / "strichartz.csv"))
        assert list(frame.columns) == ["omega", "M", "log_fit_residual"]
        assert frame["omega"].tolist() == OMEGAS

    def test_decay_is_linear_in_the_data(self):
        packet = gaussian_packet(Grid(16), 2)
        single = strichartz_decay(packet, OMEGAS, r=4.0, j=2, t_end=1.0)
        double = strichartz_decay(packet * 2.0, OMEGAS, r=4.0, j=2, t_end=1.0)
        assert np.allclose(double.M / single.M, 2.0, rtol=1e-12, atol=0.0)
        assert double.slope == pytest.approx(single.slope, rel=1e-9, abs=1e-12)

    def test_decay_ignores_rotation_sign(self):
        packet = gaussian_packet(Grid(16), 2)
        positive = strichartz_decay(packet, OMEGAS, r=4.0, j=2, t_end=1.0)
        negative = strichartz_decay(packet, [-w for w in OMEGAS], r=4.0, j=2, t_end=1.0)
        assert np.array_equal(negative.omegas, positive.omegas)
        assert np.array_equal(negative.M, positive.M)

    @pytest.mark.slow
    def test_default_experiment_slope(self):
        report = default_decay_experiment()
        assert report.slope == pytest.approx(-0.25, abs=0.05)
        assert report.tail_insensitive()
