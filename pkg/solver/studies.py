"""
Solver Studies
Vanishing-viscosity convergence and twin-run uniqueness experiments
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd
from loguru import logger

from spectral.errors import ValidationFailure
from spectral.fields import SpectralVectorField
from solver.initial_data import random_solenoidal
from solver.runner import prepare_initial_data, run
from solver.settings import SolverConfig
from solver.trajectory import Trajectory

# entrywise sup bounds the operator norm of grad u by a factor 3
OPERATOR_NORM_FACTOR = 3.0


def trajectory_gap(a: Trajectory, b: Trajectory) -> float:
    """sup over shared stored times of ||a(t) - b(t)||_{L^2}"""
    return a.sup_difference(b)


# ==================== Delta convergence ====================

@dataclass
class DeltaStudyResult:
    """sup_t ||u^delta - u^(delta/2)||_{L^2} per delta, with the log-log fit"""
    frame: pd.DataFrame
    slope: float
    intercept: float

    def gaps_monotone(self) -> bool:
        """Gaps shrink as delta decreases"""
        gaps = self.frame.sort_values("delta", ascending=False)["gap"].to_numpy()
        return bool(np.all(np.diff(gaps) <= 0.0))

    def to_dict(self) -> Dict:
        return {"slope": self.slope, "intercept": self.intercept, "rows": self.frame.to_dict(orient="records")}


def _viscous_run(u0: SpectralVectorField, config: SolverConfig, delta: float) -> Trajectory:
    cfg = config.model_copy(update={"delta": delta, "besov_stride": 0, "snapshot_stride": 0})
    return run(cfg, u0).trajectory


def delta_convergence_study(u0: SpectralVectorField, delta_list: Sequence[float], config: SolverConfig,
                            ratio: float = 0.5) -> DeltaStudyResult:
    """
    For every delta, the L^2 gap between the runs at delta and ratio * delta

    Args:
        u0: initial data shared by every run
        delta_list: strictly decreasing viscosities in (0, 1)
        config: everything except delta; dt must resolve the gaps
        ratio: second viscosity as a fraction of the first (1 gives zero gaps)

    Returns:
        DeltaStudyResult with columns delta, gap and the fitted slope of
        log gap against log delta (nan when a gap vanishes)
    """
    deltas = [float(d) for d in delta_list]
    if not deltas:
        raise ValidationFailure("delta list is empty")
    if any(not 0.0 < d < 1.0 for d in deltas):
        raise ValidationFailure("every delta must lie in (0, 1)")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValidationFailure("delta list must be strictly decreasing")
    if not 0.0 < ratio <= 1.0:
        raise ValidationFailure(f"delta ratio must lie in (0, 1], got {ratio}")

    u0 = prepare_initial_data(u0, config)
    rows: List[Dict[str, float]] = []
    for delta in deltas:
        first = _viscous_run(u0, config, delta)
        second = first if ratio == 1.0 else _viscous_run(u0, config, ratio * delta)
        gap = trajectory_gap(first, second)
        rows.append({"delta": delta, "gap": gap})
        logger.info(f"delta={delta:g}: sup gap {gap:.4e}")

    frame = pd.DataFrame(rows, columns=["delta", "gap"])
    positive = frame["gap"] > 0.0
    if positive.sum() >= 2 and positive.all():
        slope, intercept = np.polyfit(np.log(frame["delta"]), np.log(frame["gap"]), 1)
    else:
        slope, intercept = float("nan"), float("nan")
    logger.info(f"✓ Delta study: slope {slope:.4f} over {len(rows)} viscosities")
    return DeltaStudyResult(frame, float(slope), float(intercept))


# ==================== Uniqueness probe ====================

@dataclass
class UniquenessReport:
    """Twin-run difference growth against the Gronwall envelope"""
    times: np.ndarray
    difference: np.ndarray
    growth: np.ndarray
    U: np.ndarray
    envelope: np.ndarray
    fitted_c: float
    perturbation_scale: float

    @property
    def within_envelope(self) -> bool:
        return bool(np.all(self.growth <= self.envelope * (1.0 + 1e-9)))

    @property
    def max_growth(self) -> float:
        return float(self.growth.max()) if self.growth.size else 0.0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.times,
            "difference": self.difference,
            "growth": self.growth,
            "U": self.U,
            "envelope": self.envelope,
        })

    def to_dict(self) -> Dict[str, float]:
        return {
            "perturbation_scale": self.perturbation_scale,
            "max_growth": self.max_growth,
            "fitted_c": self.fitted_c,
            "within_envelope": self.within_envelope,
        }


def uniqueness_probe(u0: SpectralVectorField, config: SolverConfig, perturbation_scale: float,
                     seed: int = 0) -> UniquenessReport:
    """
    Run u from u0 and v from u0 + w0, with w0 a seeded random divergence-free
    field of L^2 norm perturbation_scale, and compare ||u - v||(t) / ||u - v||(0)
    with exp(3 U(t)), U the BKM functional of u

    The fitted c is the smallest constant with growth <= exp(c U).
    """
    if perturbation_scale < 0.0:
        raise ValidationFailure(f"perturbation scale must be nonnegative, got {perturbation_scale}")
    cfg = config.model_copy(update={"besov_stride": 0, "snapshot_stride": 0})
    u0 = prepare_initial_data(u0, cfg)
    if perturbation_scale == 0.0:
        v0 = u0
    else:
        v0 = u0 + random_solenoidal(u0.grid, seed=seed, l2=perturbation_scale)

    base = run(cfg, u0, keep_every=1)
    twin = run(cfg, v0, keep_every=1)
    times = np.asarray(base.trajectory.common_times(twin.trajectory))
    difference = base.trajectory.difference_series(twin.trajectory)
    growth = difference / difference[0] if difference[0] > 0.0 else np.zeros_like(difference)

    U = np.interp(times, base.series.times, base.series.U)
    envelope = np.exp(OPERATOR_NORM_FACTOR * U)
    grows = (U > 0.0) & (growth > 0.0)
    fitted = float(max(0.0, np.max(np.log(growth[grows]) / U[grows], initial=0.0)))

    report = UniquenessReport(times, difference, growth, U, envelope, fitted, float(perturbation_scale))
    marker = "✓" if report.within_envelope else "⚠️"
    logger.info(f"{marker} Uniqueness probe: max growth {report.max_growth:.4g}, fitted c {fitted:.4g}")
    return report
