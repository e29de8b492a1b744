"""
Trajectory
Time-ordered record of solver states
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from spectral.errors import ValidationFailure
from spectral.fields import SpectralVectorField
from solver.settings import SolverConfig

TIME_TOL = 1e-9


@dataclass
class Trajectory:
    """States u(t) at increasing times in [0, t_end], possibly strided"""
    config: SolverConfig
    times: List[float] = field(default_factory=list)
    states: List[SpectralVectorField] = field(default_factory=list)

    def append(self, t: float, u: SpectralVectorField) -> None:
        if self.times and t <= self.times[-1]:
            raise ValidationFailure(f"trajectory times must increase: {t} after {self.times[-1]}")
        if t < -TIME_TOL or t > self.config.t_end * (1 + TIME_TOL):
            raise ValidationFailure(f"time {t} outside [0, {self.config.t_end}]")
        self.times.append(float(t))
        self.states.append(u)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> SpectralVectorField:
        return self.states[-1]

    @property
    def final_time(self) -> float:
        return self.times[-1]

    def index_of(self, t: float) -> Optional[int]:
        if not self.times:
            return None
        arr = np.asarray(self.times)
        i = int(np.argmin(np.abs(arr - t)))
        scale = max(1.0, abs(t))
        return i if abs(arr[i] - t) <= TIME_TOL * scale else None

    def state_at(self, t: float) -> SpectralVectorField:
        """Stored state at time t (no interpolation)"""
        i = self.index_of(t)
        if i is None:
            raise ValidationFailure(f"no state stored at t={t}")
        return self.states[i]

    def common_times(self, other: "Trajectory") -> List[float]:
        return [t for t in self.times if other.index_of(t) is not None]

    def sup_difference(self, other: "Trajectory") -> float:
        """max over shared stored times of ||u(t) - v(t)||_{L^2}"""
        shared = self.common_times(other)
        if not shared:
            raise ValidationFailure("trajectories share no stored times")
        return max((self.state_at(t) - other.state_at(t)).energy() for t in shared)

    def difference_series(self, other: "Trajectory") -> np.ndarray:
        """||u(t) - v(t)||_{L^2} at the shared stored times"""
        return np.array([(self.state_at(t) - other.state_at(t)).energy() for t in self.common_times(other)])

    def max_divergence(self) -> float:
        return max((u.divergence_residual() for u in self.states), default=0.0)
