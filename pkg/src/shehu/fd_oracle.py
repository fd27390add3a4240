"""Finite-difference reference solvers for the worked PDE examples.

These schemes exist solely to validate transform-domain reconstructions:

  * heat: L1 discretization of the Caputo time derivative of order
    g in (0, 1] coupled with an implicit 5-point Laplacian scaled by
    1/pi^2 on the unit square (homogeneous Dirichlet); at g = 1 the
    history weights collapse and the scheme is backward Euler;

  * telegraph at time order 1: explicit second-order-in-time scheme for
    f_tt + 2 a f_t + b^2 f = laplacian(f), stable for dt <= dx / sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.sparse import identity, kron, diags
from scipy.sparse.linalg import cg

from .errors import SolveError, StabilityError
from .fpde import Grid3Field
from .fracops import FracOrder

__all__ = ["FDGrid", "l1_heat_solve", "classical_telegraph_solve"]


@dataclass(frozen=True)
class FDGrid:
    """Interior node counts on the unit square plus time stepping."""

    nx: int
    ny: int
    nt: int
    dt: float

    def __post_init__(self) -> None:
        if min(self.nx, self.ny, self.nt) < 2:
            raise ValueError("grid needs at least 2 nodes per axis")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")

    @property
    def dx(self) -> float:
        return 1.0 / (self.nx + 1)

    @property
    def dy(self) -> float:
        return 1.0 / (self.ny + 1)

    @property
    def xs(self) -> tuple[float, ...]:
        return tuple((i + 1) * self.dx for i in range(self.nx))

    @property
    def ys(self) -> tuple[float, ...]:
        return tuple((j + 1) * self.dy for j in range(self.ny))

    @property
    def ts(self) -> tuple[float, ...]:
        return tuple((k + 1) * self.dt for k in range(self.nt))

    def telegraph_stable(self) -> bool:
        return self.dt <= min(self.dx, self.dy) / math.sqrt(2.0) + 1e-15


def _laplacian(grid: FDGrid):
    """Sparse 5-point Laplacian on interior nodes, Dirichlet boundary."""

    def second_diff(n: int, h: float):
        main = -2.0 * np.ones(n)
        off = np.ones(n - 1)
        return diags([off, main, off], (-1, 0, 1)) / (h * h)

    ax = second_diff(grid.nx, grid.dx)
    ay = second_diff(grid.ny, grid.dy)
    ix = identity(grid.nx)
    iy = identity(grid.ny)
    return (kron(ax, iy) + kron(ix, ay)).tocsr()


def _ic_values(ic: Callable[[float, float], float], grid: FDGrid) -> np.ndarray:
    return np.array([ic(x, y) for x in grid.xs for y in grid.ys])


def l1_heat_solve(
    gamma: FracOrder | float,
    ic: Callable[[float, float], float],
    grid: FDGrid,
) -> Grid3Field:
    """March the fractional heat equation with the L1 history scheme.

    Weights b_j = (j+1)^(1-g) - j^(1-g); each step solves
    (I - c*A) u^k = sum_{j=1}^{k-1} (b_{j-1} - b_j) u^{k-j} + b_{k-1} u^0
    with c = Gamma(2-g) dt^g / pi^2 and A the 5-point Laplacian, by
    conjugate gradients to 1e-10 residual.

    Raises:
        SolveError: when a per-step linear solve fails to converge.
    """
    order = gamma if isinstance(gamma, FracOrder) else FracOrder(float(gamma))
    g = order.value
    if not (0.0 < g <= 1.0):
        raise ValueError(f"heat oracle needs order in (0, 1], got {g}")

    lap = _laplacian(grid)
    n = grid.nx * grid.ny
    c = math.gamma(2.0 - g) * grid.dt ** g / (math.pi ** 2)
    system = (identity(n) - c * lap).tocsr()

    # b_0 = 1 exactly (0^(1-g) -> 0 including the g = 1 limit)
    b = np.array(
        [1.0]
        + [(j + 1) ** (1.0 - g) - j ** (1.0 - g) for j in range(1, grid.nt + 1)]
    )
    u0 = _ic_values(ic, grid)
    history = [u0]
    out = np.empty((grid.nx, grid.ny, grid.nt))
    for k in range(1, grid.nt + 1):
        rhs = b[k - 1] * u0
        for j in range(1, k):
            rhs += (b[j - 1] - b[j]) * history[k - j]
        sol, info = cg(system, rhs, x0=history[-1], rtol=1e-12, atol=1e-12)
        if info != 0:
            raise SolveError(f"heat solve CG failed at step {k} (info={info})")
        history.append(sol)
        out[:, :, k - 1] = sol.reshape(grid.nx, grid.ny)
    return Grid3Field(grid.xs, grid.ys, grid.ts, out)


def classical_telegraph_solve(
    alpha: float,
    beta: float,
    ic: Callable[[float, float], float],
    ic_velocity: Callable[[float, float], float],
    grid: FDGrid,
) -> Grid3Field:
    """Explicit scheme for the order-one telegraph equation.

    Central second differences in time and space: the update solves
    (1/dt^2 + a/dt) u^{k+1} = (2/dt^2 - b^2) u^k + A u^k
                              - (1/dt^2 - a/dt) u^{k-1};
    the first step uses a Taylor start with the initial velocity.

    Raises:
        StabilityError: when dt exceeds the CFL bound dx/sqrt(2).
    """
    if alpha < 0.0 or beta < 0.0:
        raise ValueError("alpha and beta must be nonnegative")
    if not grid.telegraph_stable():
        raise StabilityError(
            f"dt={grid.dt} violates the bound min(dx,dy)/sqrt(2)="
            f"{min(grid.dx, grid.dy) / math.sqrt(2.0):.6g}"
        )
    lap = _laplacian(grid)
    dt = grid.dt
    u_prev = _ic_values(ic, grid)
    v0 = np.array([ic_velocity(x, y) for x in grid.xs for y in grid.ys])
    u_curr = (
        u_prev
        + dt * v0
        + 0.5 * dt * dt * (lap @ u_prev - 2.0 * alpha * v0 - beta * beta * u_prev)
    )
    out = np.empty((grid.nx, grid.ny, grid.nt))
    out[:, :, 0] = u_curr.reshape(grid.nx, grid.ny)
    lhs_coef = 1.0 / dt ** 2 + alpha / dt
    for k in range(2, grid.nt + 1):
        rhs = (
            (2.0 / dt ** 2 - beta * beta) * u_curr
            + lap @ u_curr
            - (1.0 / dt ** 2 - alpha / dt) * u_prev
        )
        u_prev, u_curr = u_curr, rhs / lhs_coef
        out[:, :, k - 1] = u_curr.reshape(grid.nx, grid.ny)
    return Grid3Field(grid.xs, grid.ys, grid.ts, out)
