"""
Scenario Pipelines
Runs one validated scenario end to end and persists its artifact directory

Every run directory holds config.copy (the fully-defaulted scenario), the
kind's CSV artifacts, report.txt with the headline numbers and run.log.
"""

import math
import shutil
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from loguru import logger

from config.scenario import ScenarioSpec, VerifySpec, render_scenario
from config.settings import LabSettings, get_settings
from spectral.errors import PicardDivergence, SolverAbort, ValidationFailure
from spectral.grid import Grid
from besov.reports import EmpiricalConstantReport, write_reports_csv
from rotation.verifiers import run_lemma_suite
from diagnostics.series import fit_gronwall_constants
from diagnostics.strichartz import gaussian_packet, strichartz_decay
from diagnostics.sweep import rotation_sweep
from solver.initial_data import generate
from solver.runner import run, write_key_values
from solver.studies import delta_convergence_study, uniqueness_probe

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_ABORT = 3

# relative spread allowed between two seeds of the lemma suite
SEED_STABILITY = 0.20


@dataclass
class ExecutionResult:
    """Exit status, artifact directory and headline numbers of one scenario"""
    status: int
    run_dir: Path
    headline: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == EXIT_OK


def prepare_run_dir(path: Union[str, Path], force: bool = False) -> Path:
    """
    Create the run directory, refusing to reuse a non-empty one unless forced

    Raises:
        ValidationFailure: directory exists with content and force is off,
            or the path is taken by a file
    """
    run_dir = Path(path)
    if run_dir.exists() and not run_dir.is_dir():
        raise ValidationFailure(f"output path {run_dir} exists and is not a directory")
    if run_dir.exists() and any(run_dir.iterdir()):
        if not force:
            raise ValidationFailure(f"output directory {run_dir} is not empty; pass --force to overwrite it")
        logger.warning(f"⚠️ --force: clearing {run_dir}")
        shutil.rmtree(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    return run_dir


def default_verify_spec(settings: Optional[LabSettings] = None, out: Optional[Union[str, Path]] = None) -> ScenarioSpec:
    """The built-in lemma suite scenario used by the verify verb"""
    settings = settings or get_settings()
    outputs = str(out) if out is not None else f"{settings.runtime.output_root}/verify"
    return ScenarioSpec(
        name="verify",
        kind="verify-lemmas",
        outputs=outputs,
        verify=VerifySpec(**settings.verify_defaults.model_dump()),
    )


class ScenarioExecutor:
    """
    Dispatches a scenario to the pipeline of its kind

    Pipelines return headline values, a status of aborted or flagged marking
    failure. The executor writes config.copy before and report.txt after.
    """

    def __init__(self, settings: Optional[LabSettings] = None, threads: int = 1, progress: bool = False):
        self.settings = settings or get_settings()
        self.threads = max(1, threads)
        self.progress = progress
        self.float_format = self.settings.runtime.float_format
        self.pipelines: Dict[str, Callable[[ScenarioSpec, Path], Dict[str, Any]]] = {
            "single-run": self._single_run,
            "delta-study": self._delta_study,
            "rotation-sweep": self._rotation_sweep,
            "strichartz": self._strichartz,
            "verify-lemmas": self._verify_lemmas,
            "uniqueness": self._uniqueness,
        }
        logger.info(f"ScenarioExecutor initialized (threads={self.threads})")

    def execute(self, spec: ScenarioSpec, force: bool = False) -> ExecutionResult:
        run_dir = prepare_run_dir(spec.outputs, force=force)
        (run_dir / "config.copy").write_text(render_scenario(spec))
        logger.info(f"Executing scenario {spec.name} ({spec.kind}) into {run_dir}")

        sink_id = None
        if spec.kind != "single-run":
            sink_id = logger.add(run_dir / "run.log", level=self.settings.logging.run_log_level, mode="w")
        headline: Dict[str, Any] = {"kind": spec.kind, "name": spec.name}
        try:
            try:
                headline.update(self.pipelines[spec.kind](spec, run_dir))
            except SolverAbort as abort:
                headline.update(self._aborted(abort, run_dir))
            except PicardDivergence as exc:
                headline.update(self._diverged(exc, run_dir))
            status = EXIT_ABORT if headline.get("status") in ("aborted", "flagged") else EXIT_OK
            headline.setdefault("status", "completed")
            write_key_values(run_dir / "report.txt", headline)
        finally:
            if sink_id is not None:
                logger.remove(sink_id)

        if status == EXIT_OK:
            logger.info(f"✓ Scenario {spec.name} finished, artifacts in {run_dir}")
        else:
            logger.error(f"⚠️ Scenario {spec.name} ended {headline['status']}, partial artifacts in {run_dir}")
        return ExecutionResult(status, run_dir, headline)

    # ==================== Failure paths ====================

    def _aborted(self, abort: SolverAbort, run_dir: Path) -> Dict[str, Any]:
        values: Dict[str, Any] = {}
        partial = abort.partial
        if partial is not None:
            values.update(partial.to_dict())
            if partial.run_dir is None or partial.run_dir != run_dir:
                partial.series.write_csv(run_dir / "diagnostics.csv", float_format=self.float_format)
        values.update({"status": "aborted", "abort_reason": str(abort), "abort_time": float(abort.time)})
        return values

    def _diverged(self, exc: PicardDivergence, run_dir: Path) -> Dict[str, Any]:
        if exc.iterations:
            pd.DataFrame(exc.iterations).to_csv(run_dir / "picard_iterations.csv", index=False,
                                                float_format=self.float_format)
        return {"status": "aborted", "abort_reason": str(exc), "picard_iterations": len(exc.iterations)}

    # ==================== Pipelines ====================

    def _initial_data(self, spec: ScenarioSpec):
        return generate(spec.solver.grid(), spec.data.generator, spec.data.params())

    def _single_run(self, spec: ScenarioSpec, run_dir: Path) -> Dict[str, Any]:
        u0 = self._initial_data(spec)
        result = run(spec.solver, u0, run_dir=run_dir, progress=self.progress, float_format=self.float_format,
                     log_level=self.settings.logging.run_log_level)
        values: Dict[str, Any] = result.to_dict()

        besov = result.series.besov.get("besov_5_2")
        if besov and math.isfinite(besov[0]) and besov[0] > 0.0:
            fit = fit_gronwall_constants(result.series, besov[0])
            values.update({"gronwall_c3": fit.c3, "gronwall_c4": fit.c4, "gronwall_holds": fit.holds()})
        return values

    def _delta_study(self, spec: ScenarioSpec, run_dir: Path) -> Dict[str, Any]:
        section = spec.delta_study
        u0 = self._initial_data(spec)
        study = delta_convergence_study(u0, section.deltas, spec.solver, ratio=section.ratio)
        study.frame.to_csv(run_dir / "delta_study.csv", index=False, float_format=self.float_format)
        return {
            "deltas": len(section.deltas),
            "ratio": section.ratio,
            "slope": study.slope,
            "intercept": study.intercept,
            "gaps_monotone": study.gaps_monotone(),
        }

    def _rotation_sweep(self, spec: ScenarioSpec, run_dir: Path) -> Dict[str, Any]:
        section = spec.rotation_sweep
        u0 = self._initial_data(spec)
        sweep = rotation_sweep(u0, section.omegas, spec.solver, section.u_threshold, r=section.r,
                               run_root=run_dir, threads=self.threads, progress=self.progress)
        sweep.write_csv(run_dir / "sweep_summary.csv", float_format=self.float_format)
        values: Dict[str, Any] = {
            "omegas": len(sweep.rows),
            "u_threshold": section.u_threshold,
            "U_end_baseline": sweep.baseline.U_end,
            "U_end_fastest": sweep.rows[-1].U_end,
            "suppression_holds": sweep.suppression_holds(),
            "flagged_rows": len(sweep.flagged),
        }
        if sweep.flagged:
            values["status"] = "flagged"
            values["flagged_omegas"] = ", ".join(f"{row.omega:g}" for row in sweep.flagged)
        return values

    def _strichartz(self, spec: ScenarioSpec, run_dir: Path) -> Dict[str, Any]:
        section = spec.strichartz
        grid = Grid(section.n)
        f = gaussian_packet(grid, section.j, width=section.width)
        report = strichartz_decay(f, section.omegas, r=section.r, j=section.j, t_end=section.t_end,
                                  workers=self.threads)
        report.write_csv(run_dir / "decay.csv", float_format=self.float_format)
        return {
            "r": report.r,
            "j": report.j,
            "slope": report.slope,
            "expected_slope": report.expected_slope,
            "slope_error": report.slope_error(),
            "intercept": report.intercept,
            "tail_sensitivity": report.tail_sensitivity,
            "tail_insensitive": report.tail_insensitive(),
        }

    def _verify_lemmas(self, spec: ScenarioSpec, run_dir: Path) -> Dict[str, Any]:
        section = spec.verify
        by_seed: List[List[EmpiricalConstantReport]] = []
        for seed in section.seeds:
            by_seed.append(run_lemma_suite(n=section.n, ensemble_size=section.ensemble_size, seed=seed,
                                           nu=section.nu, include_variant_ii=section.include_variant_ii,
                                           progress=self.progress))
        reports = [report for suite in by_seed for report in suite]
        write_reports_csv(reports, run_dir / "lemma_constants.csv", float_format=self.float_format)

        values: Dict[str, Any] = {"seeds": ", ".join(str(s) for s in section.seeds),
                                  "ensemble_size": section.ensemble_size}
        spreads = []
        for position, first in enumerate(by_seed[0]):
            same = [suite[position] for suite in by_seed]
            values[f"max_ratio[{first.lemma_id}]"] = max(r.max_ratio for r in same)
            if len(same) > 1:
                spread = max(same[0].relative_spread(other) for other in same[1:])
                values[f"spread[{first.lemma_id}]"] = spread
                spreads.append(spread)
        values["all_finite"] = all(r.is_finite() for r in reports)
        values["max_spread"] = max(spreads) if spreads else 0.0
        values["seed_stable"] = bool(np.all(np.asarray(spreads) <= SEED_STABILITY))
        return values

    def _uniqueness(self, spec: ScenarioSpec, run_dir: Path) -> Dict[str, Any]:
        section = spec.uniqueness
        u0 = self._initial_data(spec)
        probe = uniqueness_probe(u0, spec.solver, section.perturbation_scale, seed=section.seed)
        probe.to_frame().to_csv(run_dir / "uniqueness.csv", index=False, float_format=self.float_format)
        return probe.to_dict()


def execute(spec: ScenarioSpec, force: bool = False, threads: int = 1, settings: Optional[LabSettings] = None,
            progress: bool = False) -> ExecutionResult:
    """
    Run the pipeline of spec.kind into spec.outputs

    Args:
        spec: validated scenario
        force: clear a non-empty output directory instead of refusing
        threads: sweep pool width and FFT workers of the decay harness
        settings: lab settings (cached settings when None)
        progress: tqdm bars

    Returns:
        ExecutionResult; status EXIT_ABORT when a run aborted or a sweep row
        was flagged, partial artifacts kept

    Raises:
        ValidationFailure: unusable output directory or rejected inputs
    """
    return ScenarioExecutor(settings, threads=threads, progress=progress).execute(spec, force=force)
