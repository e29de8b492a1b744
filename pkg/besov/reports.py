"""
Empirical Constant Reports
Summary of observed inequality ratios over a random ensemble
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import numpy as np
import pandas as pd

from spectral.errors import ArtifactError, ValidationFailure

REPORT_COLUMNS = ["lemma-id", "sample-count", "min-ratio", "max-ratio", "median", "seed"]


@dataclass
class EmpiricalConstantReport:
    """Observed left/right ratios of one inequality, reduced to min/median/max"""
    lemma_id: str
    sample_count: int
    min_ratio: float
    max_ratio: float
    median: float
    seed: int
    description: str = ""
    ratios: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @classmethod
    def from_ratios(cls, lemma_id: str, ratios: Iterable[float], seed: int, description: str = "") -> "EmpiricalConstantReport":
        arr = np.asarray(list(ratios), dtype=np.float64)
        if arr.size == 0:
            raise ValidationFailure(f"{lemma_id}: empty ensemble, nothing to report")
        return cls(
            lemma_id=lemma_id,
            sample_count=int(arr.size),
            min_ratio=float(arr.min()),
            max_ratio=float(arr.max()),
            median=float(np.median(arr)),
            seed=int(seed),
            description=description,
            ratios=arr,
        )

    def is_finite(self) -> bool:
        return bool(np.isfinite([self.min_ratio, self.max_ratio, self.median]).all())

    def relative_spread(self, other: "EmpiricalConstantReport") -> float:
        """|max - max'| / max(max, max'), the seed-stability measure"""
        scale = max(abs(self.max_ratio), abs(other.max_ratio))
        if scale == 0.0:
            return 0.0
        return abs(self.max_ratio - other.max_ratio) / scale

    def to_row(self) -> Dict[str, Union[str, int, float]]:
        return {
            "lemma-id": self.lemma_id,
            "sample-count": self.sample_count,
            "min-ratio": self.min_ratio,
            "max-ratio": self.max_ratio,
            "median": self.median,
            "seed": self.seed,
        }

    def to_dict(self) -> Dict:
        data = self.to_row()
        data["description"] = self.description
        data["finite"] = self.is_finite()
        return data


def reports_to_frame(reports: Iterable[EmpiricalConstantReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in reports], columns=REPORT_COLUMNS)


def write_reports_csv(reports: Iterable[EmpiricalConstantReport], path: Union[str, Path], float_format: str = "%.10e") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    reports_to_frame(reports).to_csv(path, index=False, float_format=float_format)
    return path


def read_reports_csv(path: Union[str, Path]) -> List[EmpiricalConstantReport]:
    path = Path(path)
    if not path.exists():
        raise ArtifactError(f"report file not found: {path}")
    frame = pd.read_csv(path)
    missing = [c for c in REPORT_COLUMNS if c not in frame.columns]
    if missing:
        raise ArtifactError(f"{path} lacks columns {missing}")
    return [
        EmpiricalConstantReport(
            lemma_id=str(row["lemma-id"]),
            sample_count=int(row["sample-count"]),
            min_ratio=float(row["min-ratio"]),
            max_ratio=float(row["max-ratio"]),
            median=float(row["median"]),
            seed=int(row["seed"]),
        )
        for _, row in frame.iterrows()
    ]
