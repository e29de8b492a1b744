"""
Run Orchestrator
Steps one configuration to its horizon, sampling diagnostics and persisting artifacts

Run directory layout (when one is given):
    diagnostics.csv   one row per sampled step
    snapshots/        step_XXXXXX.bin at the configured stride, last_good.bin on abort
    report.txt        key: value headline numbers
    run.log           DEBUG log of this run
The persisted scenario copy (config.copy) is written by the caller.
"""

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from loguru import logger
from tqdm import tqdm

from spectral.errors import SolverAbort, ValidationFailure
from spectral.fields import SpectralVectorField
from spectral.operators import dealias
from spectral.snapshot import write_snapshot
from besov.partition import MIN_GRID_POINTS, DyadicPartition, build_partition
from rotation.projections import leray_project
from diagnostics.series import DEFAULT_FLOAT_FORMAT, DiagnosticsSeries
from solver.integrators import IFRK4Integrator, cfl_ratio
from solver.picard import picard_solve
from solver.settings import SolverConfig
from solver.trajectory import Trajectory

TRAJECTORY_SAMPLES = 50


@dataclass
class RunResult:
    """Everything one run produced"""
    config: SolverConfig
    trajectory: Trajectory
    series: DiagnosticsSeries
    completed: bool = True
    abort_reason: Optional[str] = None
    max_divergence: float = 0.0
    run_dir: Optional[Path] = None

    @property
    def final_time(self) -> float:
        return self.series.times[-1] if self.series.times else 0.0

    @property
    def energy_drift(self) -> float:
        return self.series.energy_drift()

    def to_dict(self) -> Dict[str, Union[str, float, int]]:
        cfg = self.config
        energy = self.series.energy
        return {
            "status": "completed" if self.completed else "aborted",
            "abort_reason": self.abort_reason or "none",
            "scheme": cfg.scheme,
            "omega": cfg.omega,
            "delta": cfg.delta,
            "n": cfg.n,
            "t_end": cfg.t_end,
            "steps": max(len(self.series) - 1, 0),
            "final_time": self.final_time,
            "energy_initial": energy[0] if energy else float("nan"),
            "energy_final": energy[-1] if energy else float("nan"),
            "energy_drift": self.energy_drift,
            "U_end": self.series.final_U,
            "max_divergence": self.max_divergence,
        }


def write_key_values(path: Union[str, Path], values: Dict[str, Any], append: bool = False) -> Path:
    """One "key: value" line per entry; floats are written round-trippable"""
    path = Path(path)
    lines = []
    for key, value in values.items():
        text = repr(float(value)) if isinstance(value, float) else str(value)
        lines.append(f"{key}: {text}")
    with open(path, "a" if append else "w") as f:
        f.write("\n".join(lines) + "\n")
    return path


def write_run_report(path: Union[str, Path], result: RunResult) -> Path:
    """report.txt of one run"""
    return write_key_values(path, result.to_dict())


def prepare_initial_data(u0: SpectralVectorField, config: SolverConfig) -> SpectralVectorField:
    """Project (and dealias) u0 when it is not already admissible, with a warning"""
    if u0.grid != config.grid():
        raise ValidationFailure(f"initial data lives on {u0.grid}, config expects {config.grid()}")
    grid = u0.grid
    needs_projection = (
        not u0.is_divergence_free()
        or bool(np.any(np.abs(u0.mean) > 0.0))
        or bool(np.any(u0.coeffs[..., grid.nyquist_mask]))
    )
    needs_dealias = config.dealias and bool(np.any(u0.coeffs[..., ~grid.dealias_mask]))
    if needs_projection:
        logger.warning(f"⚠️ initial data not divergence-free/mean-zero (residual {u0.divergence_residual():.2e}), projecting")
        u0 = leray_project(u0)
    if needs_dealias:
        logger.warning("⚠️ initial data carries modes beyond the 2/3 cutoff, dealiasing")
        u0 = dealias(u0)
    return u0


class RunRecorder:
    """Collects the trajectory, diagnostics and snapshots of a run as it advances"""

    def __init__(self, config: SolverConfig, partition: Optional[DyadicPartition], run_dir: Optional[Path],
                 keep_every: int):
        self.config = config
        self.partition = partition
        self.run_dir = run_dir
        self.keep_every = max(1, keep_every)
        self.trajectory = Trajectory(config)
        self.series = DiagnosticsSeries()
        self.max_divergence = 0.0

    def record(self, step: int, t: float, u: SpectralVectorField, last: bool) -> None:
        stride = self.config.besov_stride
        with_besov = stride > 0 and (step % stride == 0 or last)
        self.series.sample(t, u, self.partition, with_besov=with_besov)
        self.max_divergence = max(self.max_divergence, u.divergence_residual())
        if step % self.keep_every == 0 or last:
            self.trajectory.append(t, u)
        snap = self.config.snapshot_stride
        if self.run_dir is not None and snap > 0 and (step % snap == 0 or last):
            write_snapshot(self.run_dir / "snapshots" / f"step_{step:06d}.bin", u, t)

    def result(self, completed: bool, reason: Optional[str]) -> RunResult:
        return RunResult(
            config=self.config,
            trajectory=self.trajectory,
            series=self.series,
            completed=completed,
            abort_reason=reason,
            max_divergence=self.max_divergence,
            run_dir=self.run_dir,
        )


def _persist(result: RunResult, float_format: str) -> None:
    if result.run_dir is None:
        return
    result.series.write_csv(result.run_dir / "diagnostics.csv", float_format=float_format)
    write_run_report(result.run_dir / "report.txt", result)


def run(config: SolverConfig, u0: SpectralVectorField, run_dir: Optional[Union[str, Path]] = None,
        partition: Optional[DyadicPartition] = None, progress: bool = False, keep_every: Optional[int] = None,
        float_format: str = DEFAULT_FLOAT_FORMAT, log_level: str = "DEBUG") -> RunResult:
    """
    Integrate from u0 to config.t_end

    Args:
        config: solver configuration
        u0: initial data (projected with a warning when not divergence-free)
        run_dir: directory for artifacts; nothing is written when None
        partition: dyadic partition for the Besov columns (built when needed)
        progress: show a tqdm bar over the steps
        keep_every: trajectory stride in steps (default: about 50 stored states)
        float_format: CSV float format
        log_level: level of the per-run run.log sink

    Returns:
        RunResult with the strided trajectory and the full diagnostics series

    Raises:
        SolverAbort: NaN/Inf state, CFL violation mid-run or BKM guard trip;
            the last good state is persisted and the partial result attached
    """
    u = prepare_initial_data(u0, config)
    grid = u.grid
    if partition is None and config.besov_stride > 0 and grid.n >= MIN_GRID_POINTS:
        partition = build_partition(grid)

    run_path = Path(run_dir) if run_dir is not None else None
    sink_id = None
    if run_path is not None:
        run_path.mkdir(parents=True, exist_ok=True)
        thread_id = threading.get_ident()
        sink_id = logger.add(run_path / "run.log", level=log_level, mode="w",
                             filter=lambda record: record["thread"].id == thread_id)

    steps = config.n_steps
    keep = keep_every if keep_every is not None else max(1, steps // TRAJECTORY_SAMPLES)
    recorder = RunRecorder(config, partition, run_path, keep)
    logger.info(f"Run initialized: scheme={config.scheme}, omega={config.omega:g}, delta={config.delta:g}, "
                f"n={config.n}, dt={config.dt:g}, t_end={config.t_end:g}")

    try:
        if config.scheme == "picard":
            result = _run_picard(config, u, recorder)
        else:
            result = _run_ifrk4(config, u, recorder, progress)
        _persist(result, float_format)
        logger.info(f"✓ Run completed: t={result.final_time:.6g}, energy drift {result.energy_drift:.3e}, "
                    f"U(T)={result.series.final_U:.6g}")
        return result
    except SolverAbort as abort:
        partial = recorder.result(False, str(abort))
        abort.partial = partial
        if run_path is not None and abort.last_good is not None:
            write_snapshot(run_path / "snapshots" / "last_good.bin", abort.last_good, abort.time)
        _persist(partial, float_format)
        logger.error(f"⚠️ Run aborted at t={abort.time:.6g}: {abort}")
        raise
    finally:
        if sink_id is not None:
            logger.remove(sink_id)


def _run_picard(config: SolverConfig, u: SpectralVectorField, recorder: RunRecorder) -> RunResult:
    solution = picard_solve(u, config, tol=config.picard_tol, max_iter=config.picard_max_iter)
    times, states = solution.trajectory.times, solution.trajectory.states
    for step, (t, state) in enumerate(zip(times, states)):
        recorder.record(step, t, state, last=step == len(times) - 1)
    return recorder.result(True, None)


def _run_ifrk4(config: SolverConfig, u: SpectralVectorField, recorder: RunRecorder, progress: bool) -> RunResult:
    integrator = IFRK4Integrator(config, u.grid)
    steps = config.n_steps
    t = 0.0
    recorder.record(0, t, u, last=False)

    for step, h in enumerate(tqdm(config.step_sizes(), total=steps, desc="steps", disable=not progress), start=1):
        ratio = cfl_ratio(u, h)
        if ratio > config.cfl_max:
            raise SolverAbort(f"CFL violation: measured ratio {ratio:.4g} exceeds cfl_max={config.cfl_max:g}",
                              last_good=u, time=t)

        u_next = integrator.step(u, h)
        if not np.all(np.isfinite(u_next.coeffs)):
            raise SolverAbort(f"non-finite state after step {step}", last_good=u, time=t)

        last = step == steps
        t_next = config.t_end if last else step * config.dt
        recorder.record(step, t_next, u_next, last)
        logger.debug(f"step {step}: t={t_next:.6g}, energy={recorder.series.energy[-1]:.12g}")

        u, t = u_next, t_next
        if config.bkm_ceiling is not None:
            increment = recorder.series.U[-1] - recorder.series.U[-2]
            if increment > config.bkm_ceiling:
                raise SolverAbort(f"BKM guard: U increment {increment:.4g} over one step exceeds "
                                  f"{config.bkm_ceiling:g}", last_good=u, time=t)

    return recorder.result(True, None)
