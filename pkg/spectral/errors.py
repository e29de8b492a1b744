"""
Error Types
Exception hierarchy shared by every laboratory package
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple


class LabError(Exception):
    """Base class for all laboratory errors"""


class ValidationFailure(LabError, ValueError):
    """Input rejected by a precondition check"""


class NonFiniteMultiplier(ValidationFailure):
    """A Fourier symbol evaluated to NaN/Inf at some grid frequency"""

    def __init__(self, xi: Sequence[float], value: complex):
        self.xi = tuple(float(c) for c in xi)
        self.value = value
        super().__init__(
            f"multiplier is not finite at xi={self.xi} (value={value})"
        )


class ConfigError(ValidationFailure):
    """Scenario file problem, tagged with the offending line number(s)"""

    def __init__(self, message: str, lines: Optional[Sequence[int]] = None):
        self.lines: Tuple[int, ...] = tuple(lines or ())
        if self.lines:
            where = ", ".join(str(n) for n in self.lines)
            label = "line" if len(self.lines) == 1 else "lines"
            message = f"{label} {where}: {message}"
        super().__init__(message)


class SolverAbort(LabError, RuntimeError):
    """Time integration stopped before the horizon"""

    def __init__(self, message: str, last_good: Any = None, time: float = 0.0, partial: Any = None):
        self.last_good = last_good
        self.time = time
        # whatever the run produced before stopping (trajectory, series, run dir)
        self.partial = partial
        super().__init__(message)


class PicardDivergence(LabError, RuntimeError):
    """Fixed-point iteration failed to converge within max_iter"""

    def __init__(self, message: str, iterations: Optional[List[Dict[str, float]]] = None):
        self.iterations = list(iterations or [])
        super().__init__(message)


class ArtifactError(LabError):
    """Run directory content is missing or corrupt"""

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
