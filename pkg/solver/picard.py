"""
Picard Mode
Fixed-point iteration of the mild (Duhamel) formulation on a stored time grid
"""

from dataclasses import dataclass, field
from typing import Dict, List, Literal

import numpy as np
from loguru import logger

from spectral.errors import PicardDivergence, ValidationFailure
from spectral.fields import SpectralVectorField
from spectral.operators import advect
from rotation.projections import leray_project, vertical_cross
from rotation.propagators import heat_multiplier
from solver.settings import SolverConfig
from solver.trajectory import Trajectory


@dataclass
class PicardResult:
    """Converged trajectory plus the per-iteration log"""
    trajectory: Trajectory
    iterations: List[Dict[str, float]] = field(default_factory=list)

    @property
    def contraction_factors(self) -> List[float]:
        return [row["contraction_factor"] for row in self.iterations if np.isfinite(row["contraction_factor"])]

    @property
    def iteration_count(self) -> int:
        return len(self.iterations)


class PicardSolver:
    """
    Iterates v -> B(v) with

    B(v)(t) = e^{delta t Lap} u0 - int_0^t e^{delta (t - tau) Lap} [P(omega e3 x v) + P(v . grad) v](tau) dtau

    on the grid t_i = i dt, the Duhamel integral by composite trapezoid.
    """

    def __init__(self, config: SolverConfig):
        if config.delta <= 0.0:
            raise ValidationFailure(f"Picard mode needs delta > 0, got {config.delta}")
        self.config = config
        self.grid = config.grid()
        steps = config.n_steps
        self.times = [min(i * config.dt, config.t_end) for i in range(steps + 1)]
        self.times[-1] = config.t_end
        if len({round(b - a, 12) for a, b in zip(self.times, self.times[1:])}) > 1:
            raise ValidationFailure("Picard mode needs t_end to be a whole number of steps")
        self.step_heat = heat_multiplier(self.grid, config.nu, config.dt)
        logger.debug(f"Picard solver initialized: {steps} intervals, delta={config.delta:g}")

    def forcing(self, v: np.ndarray) -> np.ndarray:
        """G(v) = P(omega e3 x v) + P(v . grad) v, as coefficients"""
        field_ = SpectralVectorField(self.grid, v)
        g = self.config.omega * vertical_cross(field_).coeffs
        if self.config.nonlinear:
            g = g + advect(field_, field_, dealiased=self.config.dealias).coeffs
        return leray_project(field_.with_coeffs(g)).coeffs

    def free_evolution(self, u0: SpectralVectorField) -> np.ndarray:
        """e^{delta t_i Lap} u0 for every grid time, stacked (M+1, 3, n, n, n)"""
        nu = self.config.nu
        return np.stack([heat_multiplier(self.grid, nu, t) * u0.coeffs for t in self.times])

    def apply_map(self, free: np.ndarray, v: np.ndarray) -> np.ndarray:
        dt = self.config.dt
        nu = self.config.nu
        forcing = [self.forcing(v[i]) for i in range(len(self.times))]
        out = np.empty_like(v)
        out[0] = free[0]
        accumulated = forcing[0]
        for i in range(1, len(self.times)):
            # A_i = H(dt) A_{i-1} + G_i, so A_i = sum_l H(t_i - t_l) G_l
            accumulated = self.step_heat * accumulated + forcing[i]
            head = heat_multiplier(self.grid, nu, self.times[i]) * forcing[0]
            integral = dt * (accumulated - 0.5 * head - 0.5 * forcing[i])
            out[i] = free[i] - integral
        return out

    def sup_difference(self, a: np.ndarray, b: np.ndarray) -> float:
        volume = self.grid.volume
        return float(max(np.sqrt(np.sum(np.abs(a[i] - b[i]) ** 2) * volume) for i in range(a.shape[0])))

    def solve(self, u0: SpectralVectorField, tol: float = 1e-8, max_iter: int = 50,
              initial_guess: Literal["heat", "frozen"] = "heat") -> PicardResult:
        """
        Iterate to sup_t ||v^(m+1) - v^(m)||_{L^2} < tol

        Args:
            u0: divergence-free, mean-zero initial data
            tol: stopping tolerance on the sup-in-time L^2 difference
            max_iter: iteration cap
            initial_guess: "heat" starts from e^{delta t Lap} u0, "frozen" from u0 at all times

        Raises:
            PicardDivergence: no convergence within max_iter (carries the iteration log)
        """
        u0 = leray_project(u0)
        free = self.free_evolution(u0)
        if initial_guess == "heat":
            v = free.copy()
        elif initial_guess == "frozen":
            v = np.stack([u0.coeffs] * len(self.times))
        else:
            raise ValidationFailure(f"unknown initial guess {initial_guess!r}")

        log: List[Dict[str, float]] = []
        previous = None
        for m in range(1, max_iter + 1):
            v_next = self.apply_map(free, v)
            diff = self.sup_difference(v_next, v)
            factor = diff / previous if previous else float("nan")
            log.append({"iteration": m, "sup_diff": diff, "contraction_factor": factor})
            logger.debug(f"Picard iteration {m}: sup diff {diff:.3e}, factor {factor:.3g}")
            v = v_next
            if not np.isfinite(diff):
                break
            if diff < tol:
                trajectory = Trajectory(self.config)
                for t, coeffs in zip(self.times, v):
                    trajectory.append(t, SpectralVectorField(self.grid, coeffs))
                logger.info(f"✓ Picard converged in {m} iterations (sup diff {diff:.2e})")
                return PicardResult(trajectory, log)
            previous = diff

        raise PicardDivergence(
            f"Picard iteration did not converge within {max_iter} iterations; "
            f"reduce the horizon T or the data size so the map contracts",
            iterations=log,
        )


def picard_solve(u0: SpectralVectorField, config: SolverConfig, tol: float = 1e-8, max_iter: int = 50,
                 initial_guess: Literal["heat", "frozen"] = "heat") -> PicardResult:
    """Solve the regularized system in Picard mode; see PicardSolver.solve"""
    return PicardSolver(config).solve(u0, tol=tol, max_iter=max_iter, initial_guess=initial_guess)
