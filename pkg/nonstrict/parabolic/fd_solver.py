"""Explicit upwind finite differences for V_t + V_1 V_x = QV + B V_xx on a periodic grid."""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from nonstrict.core.system import InitialProfile, SystemSpec
from nonstrict.errors import NumericalError
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

MAX_REDUCTIONS = 20


@dataclass
class GridState:
    """
    Fields on a uniform periodic grid.

    Attributes:
        x_grid: (N,) grid points, right end of the period excluded
        fields: (n, N) components of V
        t: Time
    """

    x_grid: np.ndarray
    fields: np.ndarray
    t: float

    def __post_init__(self):
        if self.fields.shape[1] != self.x_grid.size:
            raise ValueError(f"fields have {self.fields.shape[1]} columns for {self.x_grid.size} grid points")

    @property
    def dx(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0])


@dataclass
class FdHistory:
    """GridStates at the requested output times plus step statistics."""

    states: List[GridState]
    steps: int = 0
    reductions: int = 0
    dx: float = 0.0
    stats: dict = field(default_factory=dict)

    def at(self, t: float) -> GridState:
        for state in self.states:
            if math.isclose(state.t, t, rel_tol=1e-12, abs_tol=1e-12):
                return state
        raise KeyError(f"No output stored at t={t}")

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)


def _row_sum_norm(M: Optional[np.ndarray]) -> float:
    if M is None:
        return 0.0
    return float(np.max(np.sum(np.abs(M), axis=1)))


def cfl_limits(sys: SystemSpec, state: Union[GridState, np.ndarray], dx: float) -> float:
    """
    Largest stable explicit step for the current fields.

    min(dx / max|V_1|, dx^2 / (2 max row-sum |B|), 1 / (2 ||Q||_inf)), where
    a vanishing term imposes no limit.

    Returns:
        The limit, or math.inf when no term applies
    """
    if not dx > 0:
        raise ValueError(f"dx must be positive, got {dx}")
    fields = state.fields if isinstance(state, GridState) else np.asarray(state, dtype=float)
    limits = []
    speed = float(np.max(np.abs(fields[0]))) if fields.size else 0.0
    if speed > 0:
        limits.append(dx / speed)
    diffusion = _row_sum_norm(sys.B)
    if diffusion > 0:
        limits.append(dx * dx / (2.0 * diffusion))
    source = _row_sum_norm(sys.Q)
    if source > 0:
        limits.append(1.0 / (2.0 * source))
    return min(limits) if limits else math.inf


def upwind_step(sys: SystemSpec, V: np.ndarray, dx: float, dt: float) -> np.ndarray:
    """One explicit step: upwind advection by the sign of V_1, then dt*QV and dt*B*V_xx."""
    left = np.roll(V, 1, axis=1)
    right = np.roll(V, -1, axis=1)
    speed = V[0]
    slope = np.where(speed > 0, V - left, right - V) / dx
    new = V - dt * speed * slope + dt * (sys.Q @ V)
    if sys.has_diffusion:
        new += dt * (sys.B @ ((right - 2.0 * V + left) / (dx * dx)))
    return new


def fd_solve(
    sys: SystemSpec,
    prof: InitialProfile,
    dx: float,
    dt: float,
    t_end: float,
    safety: float = 0.9,
    output_times: Optional[Sequence[float]] = None,
    max_reductions: int = MAX_REDUCTIONS
) -> FdHistory:
    """
    March the parabolic system to t_end with first-order upwind differences.

    The grid has round(L/dx) points over the profile period. Before every
    step dt is halved until it satisfies dt <= safety * cfl_limits; steps
    are shortened to land on each output time.

    Args:
        sys: System; B may be None
        prof: Periodic initial profile
        dx: Requested grid spacing
        dt: Requested time step
        t_end: Final time
        safety: CFL safety factor in (0, 1]
        output_times: Times to store (default [t_end])
        max_reductions: Halvings allowed per step

    Returns:
        FdHistory with one GridState per output time

    Raises:
        ValueError: Non-periodic profile or invalid parameters
        NumericalError: CFL still violated after max_reductions, or non-finite fields
    """
    if not prof.periodic:
        raise ValueError("fd_solve needs a periodic profile")
    if prof.n != sys.n:
        raise ValueError(f"Profile has {prof.n} components, system has {sys.n}")
    if not dx > 0 or not dt > 0:
        raise ValueError(f"dx and dt must be positive (dx={dx}, dt={dt})")
    if not 0 < safety <= 1:
        raise ValueError(f"safety must lie in (0, 1], got {safety}")
    if t_end < 0:
        raise ValueError(f"t_end must be non-negative, got {t_end}")

    times = sorted({float(t) for t in (output_times if output_times is not None else [t_end])})
    if times and (times[0] < 0 or times[-1] > t_end):
        raise ValueError(f"output_times must lie in [0, {t_end}]")

    points = max(3, int(round(prof.length / dx)))
    h_x = prof.length / points
    x = prof.domain[0] + h_x * np.arange(points)
    V = prof.value(x)
    if not np.all(np.isfinite(V)):
        raise NumericalError("Initial profile is non-finite on the grid")

    history = FdHistory([], dx=h_x)
    t = 0.0
    pending = list(times)
    while pending and pending[0] <= 0.0:
        history.states.append(GridState(x, V.copy(), pending.pop(0)))

    while pending:
        target = pending[0]
        step_dt = min(dt, target - t)
        limit = safety * cfl_limits(sys, V, h_x)
        reductions = 0
        while step_dt > limit:
            step_dt *= 0.5
            reductions += 1
            if reductions > max_reductions:
                raise NumericalError(
                    f"CFL limit {limit:.3e} not met after {max_reductions} reductions at t={t:.6g}"
                )
        if reductions:
            logger.debug(f"Step {history.steps}: dt reduced {reductions}x to {step_dt:.3e}")
            history.reductions += reductions

        V = upwind_step(sys, V, h_x, step_dt)
        history.steps += 1
        bad = ~np.isfinite(V)
        if np.any(bad):
            comp, k = (int(i[0]) for i in np.nonzero(bad))
            raise NumericalError(
                f"Non-finite V_{comp + 1} at x={x[k]:.6g} after step {history.steps} (t={t + step_dt:.6g}): "
                f"singularity or under-resolution"
            )
        t = target if step_dt == target - t else t + step_dt
        if t >= target:
            history.states.append(GridState(x, V.copy(), target))
            pending.pop(0)

    history.stats = {'steps': history.steps, 'reductions': history.reductions, 'points': points}
    logger.debug(f"fd_solve: {history.steps} steps on {points} points, {history.reductions} reductions")
    return history
