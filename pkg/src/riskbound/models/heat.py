"""
Nonlinear 1-D heat equation on (0, L):

    du/dt = k(u; z1) / m(z2) * d2u/dx2,   u(0, x) = u0
    -k(u; z1) du/dx(t, 0) = q,            du/dx(t, L) = 0

with k(u; z1) = z1 + kappa * u and m(z2) = m_scale * z2.

Method of lines on a uniform node grid x_i = i * dx, i = 0..cells, central
differences, ghost nodes for both Neumann conditions and backward Euler in
time with k lagged one step (one Picard sweep). Each step is one tridiagonal
solve.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable, ClassVar

import numpy as np
from numpy.linalg import LinAlgError
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import solve_banded

from riskbound.config import HEAT_CELLS, HEAT_CFL, HEAT_MAX_STEPS, HEAT_MIN_STEPS, logger
from riskbound.errors import NumericalError, ParameterDomainError, PhysicalValidityError, SolverError
from riskbound.models.base import Model


@dataclass(frozen=True)
class Heat1DModel(Model):
    """Temperature at (t_final, x_star); numerical controls are explicit fields."""
    kind: ClassVar[str] = 'heat1d'
    vectorized: ClassVar[bool] = False

    kappa: float = 1.5e-7
    m_scale: float = 1e-6
    q: float = 0.35
    length: float = 1.90
    u0: float = 25.0
    x_star: float = 0.0
    t_final: float = 1000.0
    cells: int = HEAT_CELLS
    cfl: float = HEAT_CFL
    min_steps: int = HEAT_MIN_STEPS
    max_steps: int = HEAT_MAX_STEPS
    time_steps: int | None = None

    def __post_init__(self):
        if self.length <= 0 or self.t_final < 0:
            raise ParameterDomainError(f"Heat model needs length > 0 and t_final >= 0, got {self.length}, {self.t_final}")
        if not 0 <= self.x_star <= self.length:
            raise ParameterDomainError(f"x_star={self.x_star} outside [0, {self.length}]")
        if self.cells < 2 or not self.cfl > 0 or not 1 <= self.min_steps <= self.max_steps:
            raise ParameterDomainError("Heat grid controls need cells >= 2, cfl > 0 and 1 <= min_steps <= max_steps")
        if self.time_steps is not None and self.time_steps < 1:
            raise ParameterDomainError(f"time_steps must be positive, got {self.time_steps}")

    def conductivity(self, u: NDArray, z1: float) -> NDArray:
        return z1 + self.kappa * u

    def capacity(self, z2: float) -> float:
        return self.m_scale * z2

    def step_count(self, z1: float, z2: float) -> int:
        """Explicit time_steps, else t_final over a CFL-like step clamped to [min_steps, max_steps]."""
        if self.time_steps is not None:
            return int(self.time_steps)
        dx = self.length / self.cells
        k0 = float(self.conductivity(np.float64(self.u0), z1))
        if k0 <= 0:
            return self.max_steps
        dt_cfl = self.cfl * dx**2 * self.capacity(z2) / k0
        wanted = math.ceil(self.t_final / dt_cfl) if dt_cfl > 0 else self.max_steps
        return min(max(wanted, self.min_steps), self.max_steps)

    def state(self, z1: ArrayLike, z2: ArrayLike) -> NDArray:
        z1, z2 = np.broadcast_arrays(np.asarray(z1, dtype=float), np.asarray(z2, dtype=float))
        values = np.empty(z1.shape)
        for index in np.ndindex(z1.shape):
            values[index] = heat1d_solution(float(z1[index]), float(z2[index]), (self.t_final, self.x_star), self)
        return values


def integrate_heat(
    params: Heat1DModel,
    z1: float,
    z2: float,
    initial: ArrayLike | Callable[[NDArray], NDArray] | None = None,
) -> tuple[NDArray, NDArray]:
    """
    Temperature profile at params.t_final.

    Args:
        params: Physical and numerical parameters
        z1: Conductivity variable
        z2: Capacity variable
        initial: Initial profile (array on the node grid or callable of x);
            uniform params.u0 when None

    Returns:
        Tuple (x, u) on the cells + 1 grid nodes

    Raises:
        PhysicalValidityError: If k(u; z1) <= 0 or m(z2) <= 0
        SolverError: If the profile becomes non-finite
        NumericalError: If the tridiagonal solve fails
    """
    n = int(params.cells)
    x = np.linspace(0.0, params.length, n + 1)
    dx = params.length / n

    if initial is None:
        u = np.full(n + 1, float(params.u0))
    elif callable(initial):
        u = np.asarray(initial(x), dtype=float).copy()
    else:
        u = np.asarray(initial, dtype=float).copy()
    if u.shape != x.shape:
        raise ParameterDomainError(f"Initial profile needs {n + 1} nodes, got shape {u.shape}")

    m = params.capacity(z2)
    if not m > 0:
        raise PhysicalValidityError(f"Heat capacity m(z2) = {m:.6g} must be positive (z2={z2:.6g})")
    if params.t_final == 0:
        return x, u

    steps = params.step_count(z1, z2)
    dt = params.t_final / steps
    banded = np.zeros((3, n + 1))

    for step in range(steps):
        k = params.conductivity(u, z1)
        if np.any(k <= 0):
            raise PhysicalValidityError(
                f"Conductivity k(u; z1) = {k.min():.6g} <= 0 at t={step * dt:.6g} (z1={z1:.6g}, z2={z2:.6g})"
            )
        r = k * dt / (m * dx**2)

        banded[1] = 1.0 + 2.0 * r
        banded[0, 1:] = -r[:-1]
        banded[2, :-1] = -r[1:]
        # Ghost nodes: u_{-1} = u_1 + 2 dx q / k_0 and u_{n+1} = u_{n-1}
        banded[0, 1] = -2.0 * r[0]
        banded[2, n - 1] = -2.0 * r[n]

        rhs = u.copy()
        rhs[0] += 2.0 * dt * params.q / (m * dx)

        try:
            u = solve_banded((1, 1), banded, rhs)
        except (LinAlgError, ValueError) as e:
            raise NumericalError(f"Heat step {step} linear solve failed (z1={z1:.6g}, z2={z2:.6g}): {e}")
        if not np.all(np.isfinite(u)):
            raise SolverError("Heat profile became non-finite", z1, z2, (step + 1) * dt)

    logger.debug(f"[Model] heat1d z=({z1:.6g}, {z2:.6g}): {steps} steps, u(0) = {u[0]:.6g}")
    return x, u


def heat1d_solution(z1: float, z2: float, query: tuple[float, float], params: Heat1DModel) -> float:
    """u(t_final, x_star; z1, z2) with query = (t_final, x_star), linear interpolation in x."""
    t_final, x_star = query
    if t_final != params.t_final or x_star != params.x_star:
        params = replace(params, t_final=t_final, x_star=x_star)
    x, u = integrate_heat(params, z1, z2)
    return float(np.interp(x_star, x, u))
