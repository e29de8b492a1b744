"""
Diagnostics Series
Energy, Besov norms, ||grad u||_inf and the BKM functional U(t) of one run

Rows are appended in time order; Besov columns hold NaN on the steps where
they were not sampled.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from loguru import logger
from scipy.integrate import trapezoid

from spectral.errors import ArtifactError, ValidationFailure
from spectral.fields import SpectralVectorField
from spectral.operators import gradient_sup
from besov.norms import TRACKED_INDICES, BesovIndex, besov_norms
from besov.partition import DyadicPartition

BASE_COLUMNS = ["t", "energy", "grad_sup", "U"]
DEFAULT_FLOAT_FORMAT = "%.17g"


@dataclass
class DiagnosticsSeries:
    """Time series sampled along one trajectory"""
    indices: Tuple[BesovIndex, ...] = tuple(TRACKED_INDICES.values())
    times: List[float] = field(default_factory=list)
    energy: List[float] = field(default_factory=list)
    grad_sup: List[float] = field(default_factory=list)
    U: List[float] = field(default_factory=list)
    besov: Dict[str, List[float]] = field(default_factory=dict)

    def __post_init__(self):
        for idx in self.indices:
            self.besov.setdefault(idx.label, [math.nan] * len(self.times))

    @property
    def columns(self) -> List[str]:
        return BASE_COLUMNS + [idx.label for idx in self.indices]

    def __len__(self) -> int:
        return len(self.times)

    def sample(self, t: float, u: SpectralVectorField, partition: Optional[DyadicPartition] = None,
               with_besov: bool = True) -> "DiagnosticsSeries":
        """Append one row: BKM quantities always, tracked Besov norms when asked"""
        bkm_update(self, t, u)
        if with_besov and partition is not None:
            for label, value in besov_norms(u, partition, self.indices).items():
                self.besov[label][-1] = value
        return self

    def series(self, key: str) -> np.ndarray:
        if key in BASE_COLUMNS:
            return np.asarray(self.times if key == "t" else getattr(self, key), dtype=np.float64)
        if key not in self.besov:
            raise ValidationFailure(f"unknown diagnostics column {key!r}")
        return np.asarray(self.besov[key], dtype=np.float64)

    @property
    def final_U(self) -> float:
        return self.U[-1] if self.U else 0.0

    def energy_drift(self) -> float:
        """|E(T) - E(0)| / E(0); 0 for the zero field"""
        if not self.energy or self.energy[0] == 0.0:
            return 0.0
        return abs(self.energy[-1] - self.energy[0]) / self.energy[0]

    def first_crossing(self, threshold: float) -> Optional[float]:
        """First sampled time with U > threshold"""
        for t, value in zip(self.times, self.U):
            if value > threshold:
                return t
        return None

    # ==================== Frames and CSV ====================

    def to_frame(self) -> pd.DataFrame:
        data = {"t": self.times, "energy": self.energy, "grad_sup": self.grad_sup, "U": self.U}
        for idx in self.indices:
            data[idx.label] = self.besov[idx.label]
        return pd.DataFrame(data, columns=self.columns)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "DiagnosticsSeries":
        missing = [c for c in BASE_COLUMNS if c not in frame.columns]
        if missing:
            raise ArtifactError(f"diagnostics columns missing: {', '.join(missing)}")
        extra = [c for c in frame.columns if c not in BASE_COLUMNS]
        try:
            indices = tuple(BesovIndex.parse(c) for c in extra)
        except ValidationFailure as exc:
            raise ArtifactError(f"unrecognized diagnostics column: {exc}")
        return cls(
            indices=indices,
            times=[float(x) for x in frame["t"]],
            energy=[float(x) for x in frame["energy"]],
            grad_sup=[float(x) for x in frame["grad_sup"]],
            U=[float(x) for x in frame["U"]],
            besov={c: [float(x) for x in frame[c]] for c in extra},
        )

    def write_csv(self, path: Union[str, Path], float_format: str = DEFAULT_FLOAT_FORMAT) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format=float_format, na_rep="nan")
        return path

    def to_dict(self) -> Dict:
        return {
            "samples": len(self),
            "final_time": self.times[-1] if self.times else None,
            "energy_initial": self.energy[0] if self.energy else None,
            "energy_final": self.energy[-1] if self.energy else None,
            "U_end": self.final_U,
        }


# ==================== BKM functional ====================

def bkm_update(series: DiagnosticsSeries, t: float, u: SpectralVectorField) -> DiagnosticsSeries:
    """
    Append ||grad u(t)||_inf and extend U by the trapezoid rule

    grad_sup is the grid maximum over all nine entries d_k u_j. Besov
    columns get NaN for the new row.

    Raises:
        ValidationFailure: t does not exceed the last sampled time
    """
    t = float(t)
    if series.times and not t > series.times[-1]:
        raise ValidationFailure(f"diagnostics times must increase: {t} after {series.times[-1]}")

    g = gradient_sup(u)
    if series.times:
        dt = t - series.times[-1]
        U = series.U[-1] + 0.5 * dt * (series.grad_sup[-1] + g)
    else:
        U = 0.0

    series.times.append(t)
    series.energy.append(u.energy())
    series.grad_sup.append(g)
    series.U.append(U)
    for values in series.besov.values():
        values.append(math.nan)
    return series


# ==================== Gronwall envelope ====================

@dataclass
class GronwallFit:
    """Smallest (c3, c4) keeping the measured norm under c3 ||u0|| exp(c4 U)"""
    c3: float
    c4: float
    times: np.ndarray
    residual: np.ndarray

    def holds(self, rtol: float = 1e-12) -> bool:
        scale = float(np.max(np.abs(self.residual))) if self.residual.size else 0.0
        return bool(np.all(self.residual >= -rtol * max(scale, 1.0)))

    def to_dict(self) -> Dict[str, float]:
        return {"c3": self.c3, "c4": self.c4, "min_residual": float(self.residual.min()) if self.residual.size else 0.0}


def gronwall_envelope(series: DiagnosticsSeries, u0_norm: float, c3: float, c4: float) -> np.ndarray:
    """c3 * u0_norm * exp(c4 * U(t)) at every sampled time"""
    if c3 <= 0.0 or c4 < 0.0:
        raise ValidationFailure(f"Gronwall constants must satisfy c3 > 0, c4 >= 0 (got {c3}, {c4})")
    return c3 * u0_norm * np.exp(c4 * series.series("U"))


def fit_gronwall_constants(series: DiagnosticsSeries, u0_norm: float, key: str = "besov_5_2") -> GronwallFit:
    """
    Fit c3 at t = 0, then the smallest c4 >= 0 for which the measured
    series stays below the envelope at every sampled time

    Only rows where the Besov column was sampled take part.
    """
    if u0_norm <= 0.0:
        raise ValidationFailure("Gronwall fit needs a nonzero initial norm")
    values = series.series(key)
    U = series.series("U")
    times = series.series("t")
    sampled = np.isfinite(values)
    if not sampled.any():
        raise ValidationFailure(f"column {key!r} was never sampled")
    values, U, times = values[sampled], U[sampled], times[sampled]

    c3 = float(values[0] / u0_norm)
    if c3 <= 0.0:
        raise ValidationFailure("Gronwall fit needs a nonzero measured norm at t=0")
    base = c3 * u0_norm
    growth = U > 0.0
    c4 = 0.0
    if growth.any():
        with np.errstate(divide="ignore"):
            needed = np.log(values[growth] / base) / U[growth]
        c4 = float(max(0.0, np.max(needed[np.isfinite(needed)], initial=0.0)))

    residual = base * np.exp(c4 * U) - values
    logger.debug(f"Gronwall fit on {key}: c3={c3:.4g}, c4={c4:.4g}")
    return GronwallFit(c3, c4, times, residual)


# ==================== Time norms ====================

def time_lr_norm(series: DiagnosticsSeries, key: str, r: float) -> float:
    """
    ||b||_{L^r(0, T)} of a sampled column by the trapezoid rule

    r = inf gives the maximum. Unsampled (NaN) rows are skipped.
    """
    if r < 1.0:
        raise ValidationFailure(f"time exponent must be >= 1, got {r}")
    values = series.series(key)
    times = series.series("t")
    keep = np.isfinite(values)
    values, times = values[keep], times[keep]
    if values.size == 0:
        return math.nan
    if math.isinf(r):
        return float(np.max(np.abs(values)))
    if values.size == 1:
        return 0.0
    return float(trapezoid(np.abs(values) ** r, times) ** (1.0 / r))


# ==================== CSV reading ====================

def _parse_cell(value: str, column: str, row: int, allow_nan: bool) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ArtifactError(f"column {column!r} holds {value!r}, not a number", row=row)
    if math.isnan(number) and not allow_nan:
        raise ArtifactError(f"column {column!r} is NaN", row=row)
    if math.isinf(number):
        raise ArtifactError(f"column {column!r} is infinite", row=row)
    return number


def read_diagnostics_csv(path: Union[str, Path]) -> DiagnosticsSeries:
    """
    Load diagnostics.csv, validating every row

    Row numbers in errors count the header as row 1.

    Raises:
        ArtifactError: missing file, missing columns, no samples, or a bad row
    """
    path = Path(path)
    if not path.exists():
        raise ArtifactError(f"{path} does not exist")
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise ArtifactError(f"{path}: no samples")
    except pd.errors.ParserError as exc:
        raise ArtifactError(f"{path}: unreadable CSV ({exc})")

    missing = [c for c in BASE_COLUMNS if c not in raw.columns]
    if missing:
        raise ArtifactError(f"{path}: columns missing: {', '.join(missing)}")
    if raw.empty:
        raise ArtifactError(f"{path}: no samples")

    parsed: Dict[str, List[float]] = {c: [] for c in raw.columns}
    previous_t = -math.inf
    previous_U = -math.inf
    for i, record in enumerate(raw.itertuples(index=False)):
        row = i + 2
        for column, value in zip(raw.columns, record):
            parsed[column].append(_parse_cell(value, column, row, allow_nan=column not in BASE_COLUMNS))
        t, U = parsed["t"][-1], parsed["U"][-1]
        if t <= previous_t:
            raise ArtifactError(f"time {t} does not increase", row=row)
        if U < previous_U:
            raise ArtifactError(f"U decreases from {previous_U} to {U}", row=row)
        previous_t, previous_U = t, U

    return DiagnosticsSeries.from_frame(pd.DataFrame(parsed, columns=list(raw.columns)))


def concatenate(first: DiagnosticsSeries, second: DiagnosticsSeries) -> DiagnosticsSeries:
    """
    Join a series with its continuation, shifting the second U by the first's end

    The continuation must start at the first's final time.
    """
    if not second.times:
        return first
    if not first.times:
        return second
    if abs(second.times[0] - first.times[-1]) > 1e-12 * max(1.0, abs(first.times[-1])):
        raise ValidationFailure("continuation must start where the first series ends")
    offset = first.U[-1]
    out = DiagnosticsSeries(
        indices=first.indices,
        times=first.times + second.times[1:],
        energy=first.energy + second.energy[1:],
        grad_sup=first.grad_sup + second.grad_sup[1:],
        U=first.U + [offset + x for x in second.U[1:]],
        besov={k: first.besov[k] + second.besov.get(k, [math.nan] * len(second))[1:] for k in first.besov},
    )
    return out
