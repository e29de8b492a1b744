"""
Rotation Sweep
Inviscid runs of fixed data over a list of rotation rates, compared through U(t)
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from spectral.errors import SolverAbort
from spectral.fields import SpectralVectorField
from besov.partition import DyadicPartition, build_partition
from diagnostics.series import DiagnosticsSeries, time_lr_norm
from solver.runner import prepare_initial_data, run
from solver.settings import SolverConfig

SUMMARY_COLUMNS = ["omega", "t_hit", "U_end", "lr_norm_b1inf", "max_besov_5_2", "flagged"]


@dataclass
class SweepRow:
    """Outcome of one rotation rate"""
    omega: float
    t_hit: float
    U_end: float
    lr_norm_b1inf: float
    max_besov_5_2: float
    flagged: bool = False
    reason: str = ""
    series: Optional[DiagnosticsSeries] = field(default=None, repr=False)

    def to_row(self) -> Dict[str, Union[float, bool]]:
        return {
            "omega": self.omega,
            "t_hit": self.t_hit,
            "U_end": self.U_end,
            "lr_norm_b1inf": self.lr_norm_b1inf,
            "max_besov_5_2": self.max_besov_5_2,
            "flagged": self.flagged,
        }


@dataclass
class RotationSweepResult:
    """Rows ordered by |omega|, the omega = 0 baseline first"""
    rows: List[SweepRow]
    u_threshold: float
    r: float

    def row(self, omega: float) -> SweepRow:
        for row in self.rows:
            if row.omega == omega:
                return row
        raise KeyError(omega)

    @property
    def baseline(self) -> SweepRow:
        return self.row(0.0)

    @property
    def flagged(self) -> List[SweepRow]:
        return [row for row in self.rows if row.flagged]

    def suppression_holds(self, noise: float = 0.10, omega_star: float = 0.0) -> bool:
        """
        U(t_end) at the largest |omega| is below the baseline, and U(t_end)
        is nonincreasing in |omega| beyond omega_star up to relative noise
        """
        usable = sorted((r for r in self.rows if not r.flagged), key=lambda r: abs(r.omega))
        if len(usable) < 2 or usable[0].omega != 0.0:
            return False
        if not usable[-1].U_end < usable[0].U_end:
            return False
        tail = [r for r in usable if abs(r.omega) >= omega_star]
        return all(b.U_end <= a.U_end * (1.0 + noise) for a, b in zip(tail, tail[1:]))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.to_row() for row in self.rows], columns=SUMMARY_COLUMNS)

    def write_csv(self, path: Union[str, Path], float_format: str = "%.17g") -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format=float_format)
        return path


def _row_from_series(omega: float, series: DiagnosticsSeries, t_end: float, u_threshold: float, r: float,
                     flagged: bool = False, reason: str = "") -> SweepRow:
    hit = series.first_crossing(u_threshold)
    besov = series.series("besov_5_2") if "besov_5_2" in series.besov else np.array([])
    besov = besov[np.isfinite(besov)]
    return SweepRow(
        omega=omega,
        t_hit=t_end if hit is None else hit,
        U_end=series.final_U,
        lr_norm_b1inf=time_lr_norm(series, "besov_inf_1", r) if "besov_inf_1" in series.besov else float("nan"),
        max_besov_5_2=float(besov.max()) if besov.size else float("nan"),
        flagged=flagged,
        reason=reason,
        series=series,
    )


def rotation_sweep(u0: SpectralVectorField, omega_list: Sequence[float], config: SolverConfig,
                   u_threshold: float, r: float = 4.0, run_root: Optional[Union[str, Path]] = None,
                   threads: int = 1, partition: Optional[DyadicPartition] = None,
                   progress: bool = False) -> RotationSweepResult:
    """
    Run the inviscid solver once per omega and tabulate the lifespan proxy

    Args:
        u0: shared initial data
        omega_list: rotation rates; omega = 0 is added when missing
        config: base configuration; delta is forced to 0 and omega replaced
        u_threshold: T_hit is the first time U exceeds this value (t_end if never)
        r: time exponent of the reported L^r(0, T; B^1_{inf,1}) norm
        run_root: parent directory; each rate writes omega_<value>/
        threads: width of the thread pool over rates

    Returns:
        RotationSweepResult; aborted runs are flagged and keep their partial series
    """
    omegas = sorted({float(w) for w in omega_list} | {0.0}, key=lambda w: (abs(w), w))
    base = config.model_copy(update={"delta": 0.0})
    u0 = prepare_initial_data(u0, base)
    if partition is None and base.besov_stride > 0:
        partition = build_partition(u0.grid)
    root = Path(run_root) if run_root is not None else None

    def one(omega: float) -> SweepRow:
        cfg = base.model_copy(update={"omega": omega})
        run_dir = root / f"omega_{omega:g}" if root is not None else None
        try:
            result = run(cfg, u0, run_dir=run_dir, partition=partition)
            return _row_from_series(omega, result.series, cfg.t_end, u_threshold, r)
        except SolverAbort as abort:
            logger.warning(f"⚠️ omega={omega:g} aborted, row flagged: {abort}")
            partial = abort.partial.series if abort.partial is not None else DiagnosticsSeries()
            return _row_from_series(omega, partial, cfg.t_end, u_threshold, r, flagged=True, reason=str(abort))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(tqdm(pool.map(one, omegas), total=len(omegas), desc="omega", disable=not progress))
    else:
        rows = [one(w) for w in tqdm(omegas, desc="omega", disable=not progress)]

    result = RotationSweepResult(rows, u_threshold, r)
    for row in rows:
        logger.info(f"omega={row.omega:g}: U(T)={row.U_end:.6g}, T_hit={row.t_hit:.4g}{' [flagged]' if row.flagged else ''}")
    marker = "✓" if result.suppression_holds() else "⚠️"
    logger.info(f"{marker} Rotation sweep over {len(rows)} rates complete")
    return result
