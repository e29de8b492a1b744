"""
Besov Norms
Homogeneous and inhomogeneous B^s_{p,q} norms over the grid's dyadic range
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Union

import numpy as np

from spectral.errors import ValidationFailure
from spectral.fields import SpectralScalarField, SpectralVectorField
from spectral.operators import lp_norm
from besov.partition import DyadicPartition, lp_block, psi_block

Field = Union[SpectralScalarField, SpectralVectorField]

COMPUTABLE = (1.0, 2.0, np.inf)


def _exponent(value: Union[str, float]) -> float:
    if isinstance(value, str):
        text = value.strip().lower()
        value = np.inf if text in ("inf", "infinity", "oo", "∞") else float(Fraction(text))
    value = float(value)
    if value not in COMPUTABLE:
        raise ValidationFailure(f"exponent {value} outside the computable set {{1, 2, inf}}")
    return value


def _fmt(x: float) -> str:
    if np.isinf(x):
        return "inf"
    frac = Fraction(x).limit_denominator(64)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}_{frac.denominator}"


@dataclass(frozen=True)
class BesovIndex:
    """
    (s, p, q) plus the homogeneous flag

    p and q are restricted to {1, 2, inf}.
    """
    s: float
    p: float = 2.0
    q: float = 1.0
    homogeneous: bool = False

    def __post_init__(self):
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "p", _exponent(self.p))
        object.__setattr__(self, "q", _exponent(self.q))
        if not np.isfinite(self.s):
            raise ValidationFailure(f"regularity s must be finite, got {self.s}")

    @property
    def label(self) -> str:
        """
        CSV column key

        The default tracked set uses short keys (besov_5_2, hom_besov_5_2,
        besov_inf_1); anything else spells out s, p and q.
        """
        for key, idx in TRACKED_INDICES.items():
            if idx == self:
                return key
        prefix = "hom_besov" if self.homogeneous else "besov"
        return f"{prefix}_s{_fmt(self.s)}_p{_fmt(self.p)}_q{_fmt(self.q)}"

    def __str__(self) -> str:
        head = "hB" if self.homogeneous else "B"
        return f"{head}^{{{Fraction(self.s).limit_denominator(64)}}}_{{{_fmt(self.p)},{_fmt(self.q)}}}"

    _PATTERN = re.compile(
        r"^(?P<head>hB|B)\^\{?(?P<s>-?[\d./]+)\}?_\{(?P<p>[^,}]+),(?P<q>[^}]+)\}$"
    )
    _LABEL = re.compile(r"^(?P<hom>hom_)?besov_s(?P<s>-?\d+(?:_\d+)?)_p(?P<p>\d+|inf)_q(?P<q>\d+|inf)$")

    @classmethod
    def parse(cls, text: str) -> "BesovIndex":
        """
        Parse "B^{5/2}_{2,1}", "hB^{5/2}_{2,1}" (homogeneous) or a column label (besov_5_2, besov_s3_p2_q1)
        """
        text = text.strip()
        if text in TRACKED_INDICES:
            return TRACKED_INDICES[text]
        label = cls._LABEL.match(text)
        if label:
            return cls(
                s=float(Fraction(label.group("s").replace("_", "/"))),
                p=label.group("p"),
                q=label.group("q"),
                homogeneous=label.group("hom") is not None,
            )
        match = cls._PATTERN.match(text.replace(" ", ""))
        if not match:
            raise ValidationFailure(f"cannot parse Besov index {text!r}")
        return cls(
            s=float(Fraction(match.group("s"))),
            p=match.group("p"),
            q=match.group("q"),
            homogeneous=match.group("head") == "hB",
        )


TRACKED_INDICES: Dict[str, BesovIndex] = {
    "besov_5_2": BesovIndex(2.5, 2, 1),
    "besov_7_2": BesovIndex(3.5, 2, 1),
    "hom_besov_5_2": BesovIndex(2.5, 2, 1, homogeneous=True),
    "besov_inf_1": BesovIndex(1.0, np.inf, 1),
}


# ==================== Norm evaluation ====================

def block_norms(f: Field, partition: DyadicPartition, p: float, shells: Iterable[int]) -> Dict[int, float]:
    """||Delta_j f||_{L^p} for each requested shell"""
    p = _exponent(p)
    if f.grid != partition.grid:
        raise ValidationFailure(f"field grid {f.grid} differs from partition grid {partition.grid}")
    if p == 2.0:
        # Parseval per block, no transforms needed
        power = np.abs(np.asarray(f.coeffs)) ** 2
        if power.ndim == 4:
            power = power.sum(axis=0)
        vol = partition.grid.volume
        return {j: float(np.sqrt(np.sum(power * partition.bump(j) ** 2) * vol)) for j in shells}
    return {j: lp_norm(lp_block(f, partition, j), p) for j in shells}


def sequence_norm(values: Iterable[float], q: float) -> float:
    """l^q norm of a finite nonnegative sequence"""
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        return 0.0
    q = _exponent(q)
    if q == 1.0:
        return float(arr.sum())
    if q == 2.0:
        return float(np.sqrt(np.sum(arr ** 2)))
    return float(arr.max())


def besov_norm(f: Field, partition: DyadicPartition, idx: BesovIndex) -> float:
    """
    ||f||_{B^s_{p,q}} over the grid's dyadic range

    Homogeneous: l^q over j in [j_min, j_max] of 2^(sj) ||Delta_j f||_p.
    Inhomogeneous: l^q over j >= 1 plus ||psi * f||_p. Vector fields use
    the pointwise Euclidean magnitude inside each L^p norm.
    """
    if idx.homogeneous:
        shells = list(partition.shells)
    else:
        shells = [j for j in partition.shells if j >= 1]

    norms = block_norms(f, partition, idx.p, shells)
    total = sequence_norm((2.0 ** (idx.s * j) * norms[j] for j in shells), idx.q)
    if not idx.homogeneous:
        total += lp_norm(psi_block(f, partition), idx.p)
    return total


def besov_norms(f: Field, partition: DyadicPartition, indices: Iterable[BesovIndex]) -> Dict[str, float]:
    """Evaluate several indices at once, keyed by label"""
    return {idx.label: besov_norm(f, partition, idx) for idx in indices}
