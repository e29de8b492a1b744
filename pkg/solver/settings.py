"""
Solver Configuration
Validated parameters of one time integration of the rotating Euler system
"""

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from spectral.grid import Grid


class SolverConfig(BaseModel):
    """
    Rotation, regularization, grid and stepping parameters

    delta is the regularizing viscosity; delta = 0 is the inviscid limit.
    omega may be zero or negative.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    omega: float = 0.0
    delta: float = Field(default=0.0, ge=0.0, lt=1.0)
    n: int = 32
    box_size: float = Field(default=2.0 * math.pi, gt=0.0)
    dt: float = Field(default=1e-3, gt=0.0)
    t_end: float = Field(default=1.0, gt=0.0)
    scheme: Literal["ifrk4", "picard"] = "ifrk4"
    dealias: bool = True
    nonlinear: bool = True
    cfl_max: float = Field(default=0.5, gt=0.0)

    # guard on the per-step increment of U(t); None disables it
    bkm_ceiling: Optional[float] = Field(default=None, gt=0.0)
    snapshot_stride: int = Field(default=0, ge=0)
    besov_stride: int = Field(default=1, ge=0)

    # Picard mode only
    picard_tol: float = Field(default=1e-8, gt=0.0)
    picard_max_iter: int = Field(default=50, ge=1)

    @field_validator("n")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value < 4 or value & (value - 1):
            raise ValueError(f"n must be a power of two >= 4, got {value}")
        return value

    @model_validator(mode="after")
    def _finite(self) -> "SolverConfig":
        for name in ("omega", "box_size", "dt", "t_end"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        return self

    # ==================== Derived quantities ====================

    @property
    def nu(self) -> float:
        """Diffusivity of the heat factor, equal to delta"""
        return self.delta

    def grid(self) -> Grid:
        return Grid(self.n, self.box_size)

    @property
    def n_steps(self) -> int:
        """Number of steps to reach t_end; the last one may be shorter than dt"""
        return max(1, math.ceil(self.t_end / self.dt - 1e-9))

    def step_sizes(self):
        """Yield the step length of every step, summing to t_end exactly"""
        steps = self.n_steps
        for i in range(steps - 1):
            yield self.dt
        yield self.t_end - (steps - 1) * self.dt

    def l_delta_t(self, t: Optional[float] = None) -> float:
        """L_{delta,T} = T + T^(1/2) delta^(-1/2); infinite for delta = 0"""
        t = self.t_end if t is None else t
        if self.delta == 0.0:
            return math.inf
        return t + math.sqrt(t / self.delta)

    def contraction_number(self, c0: float, c1: float, c2: float, u0_norm: float,
                           t_delta_omega: Optional[float] = None) -> float:
        """
        Left side of the fixed-point smallness condition

        2 c1 |omega| T_{delta,omega} + 8 c0 c2 ||u0|| (T + T^(1/2) delta^(-1/2)),
        which must stay below 1 for the mild-formulation map to contract.
        """
        t_do = self.t_end if t_delta_omega is None else t_delta_omega
        return 2.0 * c1 * abs(self.omega) * t_do + 8.0 * c0 * c2 * u0_norm * self.l_delta_t()
