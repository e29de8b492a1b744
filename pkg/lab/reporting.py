"""
Run Reports
Reads a run directory back and evaluates its embedded pass/fail checks
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd
from loguru import logger

from config.scenario import load_scenario
from spectral.errors import ArtifactError, LabError
from besov.reports import read_reports_csv
from diagnostics.series import read_diagnostics_csv

ENERGY_DRIFT_BOUND = 1e-8
DIVERGENCE_BOUND = 1e-8


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {verdict}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class RunReport:
    """Headline table and checks of one run directory"""
    run_dir: Path
    kind: str
    headline: Dict[str, str] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def text(self) -> str:
        width = max((len(key) for key in self.headline), default=0)
        lines = [f"Run report: {self.run_dir}", f"  {'kind'.ljust(width)}  {self.kind}"]
        for key, value in self.headline.items():
            if key != "kind":
                lines.append(f"  {key.ljust(width)}  {value}")
        lines.append("Checks:")
        if not self.checks:
            lines.append("  (none apply)")
        lines.extend(f"  {check.line()}" for check in self.checks)
        return "\n".join(lines) + "\n"


def read_report(path: Union[str, Path]) -> Dict[str, str]:
    """Parse a report.txt of "key: value" lines"""
    path = Path(path)
    if not path.exists():
        raise ArtifactError(f"{path} does not exist")
    values: Dict[str, str] = {}
    for number, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, value = line.partition(":")
        if not sep or not key.strip():
            raise ArtifactError(f"{path}: expected 'key: value', got {line!r}", row=number)
        values[key.strip()] = value.strip()
    return values


def _as_float(text: Optional[str]) -> float:
    try:
        return float(text) if text is not None else math.nan
    except ValueError:
        return math.nan


def _delta(run_dir: Path, values: Dict[str, str]) -> float:
    if "delta" in values:
        return _as_float(values["delta"])
    copy = run_dir / "config.copy"
    if copy.exists():
        try:
            return load_scenario(copy).solver.delta
        except LabError as exc:
            logger.warning(f"⚠️ config.copy unreadable: {exc}")
    return math.nan


def _diagnostics_checks(run_dir: Path, values: Dict[str, str], report: RunReport) -> None:
    series = read_diagnostics_csv(run_dir / "diagnostics.csv")
    drift = series.energy_drift()
    report.headline.update({
        "samples": str(len(series)),
        "final_time": f"{series.times[-1]:.6g}",
        "energy_initial": repr(series.energy[0]),
        "energy_final": repr(series.energy[-1]),
        "energy_drift": f"{drift:.3e}",
        "U_end": repr(series.final_U),
    })
    completed = values.get("status", "completed") == "completed"
    if _delta(run_dir, values) == 0.0 and completed:
        report.checks.append(Check("energy drift ≤ 1e-8", drift <= ENERGY_DRIFT_BOUND, f"{drift:.3e}"))
    if "max_divergence" in values:
        residual = _as_float(values["max_divergence"])
        report.checks.append(Check("divergence ≤ 1e-8", residual <= DIVERGENCE_BOUND, f"{residual:.3e}"))


def _sweep_checks(run_dir: Path, report: RunReport) -> None:
    summary = run_dir / "sweep_summary.csv"
    try:
        frame = pd.read_csv(summary)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise ArtifactError(f"{summary}: unreadable ({exc})")
    if "flagged" not in frame.columns or "omega" not in frame.columns:
        raise ArtifactError(f"{summary}: omega/flagged columns missing")
    flagged = frame.loc[frame["flagged"].astype(str).str.lower() == "true", "omega"].tolist()

    for sub in sorted(run_dir.glob("omega_*")):
        if (sub / "diagnostics.csv").exists():
            read_diagnostics_csv(sub / "diagnostics.csv")
    report.headline["sweep_rows"] = str(len(frame))
    detail = ", ".join(f"omega={w:g}" for w in flagged)
    report.checks.append(Check("no flagged rows", not flagged, detail))


def _lemma_checks(run_dir: Path, report: RunReport) -> None:
    constants = read_reports_csv(run_dir / "lemma_constants.csv")
    infinite = sorted({c.lemma_id for c in constants if not c.is_finite()})
    report.headline["lemma_rows"] = str(len(constants))
    report.checks.append(Check("lemma constants finite", not infinite, ", ".join(infinite)))


def report(run_dir: Union[str, Path]) -> RunReport:
    """
    Summarize a run directory

    Args:
        run_dir: directory written by execute (or by run with a run_dir)

    Returns:
        RunReport; passed is True iff every embedded check passes

    Raises:
        ArtifactError: missing directory or diagnostics, corrupt CSV (with
            its row number), empty diagnostics ("no samples")
    """
    run_dir = Path(run_dir)
    if not run_dir.is_dir():
        raise ArtifactError(f"run directory {run_dir} does not exist")
    report_path = run_dir / "report.txt"
    values = read_report(report_path) if report_path.exists() else {}
    kind = values.get("kind", "single-run")
    summary = RunReport(run_dir, kind, headline={k: v for k, v in values.items() if k != "kind"})

    has_diagnostics = (run_dir / "diagnostics.csv").exists()
    if kind == "single-run" or has_diagnostics:
        _diagnostics_checks(run_dir, values, summary)
    if (run_dir / "sweep_summary.csv").exists():
        _sweep_checks(run_dir, summary)
    if (run_dir / "lemma_constants.csv").exists():
        _lemma_checks(run_dir, summary)
    if values.get("status") in ("aborted", "flagged"):
        summary.checks.append(Check("run completed", False, values.get("abort_reason", values["status"])))

    marker = "✓" if summary.passed else "⚠️"
    logger.info(f"{marker} Report for {run_dir}: {sum(c.passed for c in summary.checks)}/{len(summary.checks)} checks pass")
    return summary
