"""Exact solutions along characteristics and on grids before blow-up."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from nonstrict.core.system import InitialProfile, SystemSpec, augmented_matrix
from nonstrict.errors import BlowupError
from nonstrict.numkit.linalg import expm
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

NEWTON_STEPS = 3


@dataclass(frozen=True, eq=False)
class CharacteristicState:
    """
    Solution carried along the characteristic starting at x0.

    Attributes:
        t: Time
        x0: Starting point
        x: Position x(t)
        V: Solution vector V(t, x(t))
        q: Jacobian dx(t)/dx0 of the flow map
        u: Numerators of the derivatives, V_x = u / q
    """

    t: float
    x0: float
    x: float
    V: np.ndarray
    q: float
    u: np.ndarray

    @property
    def derivative(self) -> np.ndarray:
        """V_x along the characteristic; inf/nan once q <= 0."""
        if self.q > 0:
            return self.u / self.q
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.where(self.u == 0.0, np.nan, np.sign(self.u) * np.inf)


def propagate(sys: SystemSpec, values: np.ndarray, derivs: np.ndarray, t: float):
    """
    Advance many characteristics at once.

    Args:
        sys: System
        values: (n, P) initial values V_0(x0)
        derivs: (n, P) initial derivatives V_0'(x0)
        t: Time

    Returns:
        Tuple (displacement (P,), V (n, P), q (P,), u (n, P))
    """
    E = expm(augmented_matrix(sys), t)
    P = values.shape[1]
    carried = E @ np.vstack([np.zeros(P), values])
    linear = E @ np.vstack([np.ones(P), derivs])
    return carried[0], carried[1:], linear[0], linear[1:]


def characteristic_solve(sys: SystemSpec, prof: InitialProfile, x0: float, t: float) -> CharacteristicState:
    """
    Solve along the characteristic through x0 up to time t.

    V(t) = exp(Qt) V_0(x0); x(t) - x0 and (q, u)(t) come from the augmented
    exponential applied to (0, V_0(x0)) and (1, V_0'(x0)).

    Raises:
        ValueError: If x0 lies outside the profile domain or n mismatches
    """
    if prof.n != sys.n:
        raise ValueError(f"Profile has {prof.n} components, system has {sys.n}")
    if not prof.contains(x0):
        raise ValueError(f"x0={x0} outside profile domain {prof.domain}")

    v0 = prof.value(np.array([x0]))
    d0 = prof.derivative(np.array([x0]))
    shift, V, q, u = propagate(sys, v0, d0, t)
    return CharacteristicState(
        t=float(t),
        x0=float(x0),
        x=float(x0 + shift[0]),
        V=V[:, 0].copy(),
        q=float(q[0]),
        u=u[:, 0].copy()
    )


def conserved_radius(state: CharacteristicState) -> float:
    """V^2 + U^2, constant along cold-plasma characteristics."""
    if state.V.size != 2:
        raise ValueError(f"conserved_radius needs n=2, got n={state.V.size}")
    return float(state.V[0] ** 2 + state.V[1] ** 2)


def derivative_invariant(v, u):
    """
    First integral of the cold-plasma derivative system.

    (v^2 + 2u - 1) / (u - 1)^2 stays constant along a characteristic while
    the solution is smooth; v = V_x and u = U_x.
    """
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        return (v ** 2 + 2.0 * u - 1.0) / (u - 1.0) ** 2


def classify_derivative_orbit(D: float, tol: float = 0.0) -> str:
    """Conic traced by (V_x, U_x): ellipse for D<0, parabola for D=0, hyperbola for D>0."""
    if D < -tol:
        return 'ellipse'
    if D > tol:
        return 'hyperbola'
    return 'parabola'


@dataclass
class GridSolution:
    """V(t, x), V_x(t, x) and the flow-map Jacobian q on an output grid."""

    t: float
    x: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    min_q: float
    jacobian: Optional[np.ndarray] = None


def grid_solution(
    sys: SystemSpec,
    prof: InitialProfile,
    t: float,
    x_grid,
    refine: int = 8,
    min_shots: int = 512
) -> GridSolution:
    """
    Solution on x_grid at time t by shooting characteristics.

    Characteristics are started from a uniform refinement of the domain
    and their arrival points must be strictly increasing. The inverse map
    x -> x0 is interpolated monotonically (PCHIP), polished by Newton steps
    on x0 + shift(x0) = x, and V, u/q and q are then evaluated exactly on the
    characteristic through each recovered x0. Periodic
    profiles are extended by whole periods so the arrival points cover the
    domain. For non-periodic profiles, grid points outside the covered
    range come back as NaN.

    Args:
        sys: System (B is ignored)
        prof: Initial profile
        t: Time
        x_grid: Output positions
        refine: Shooting points per output point
        min_shots: Lower bound on shooting points

    Returns:
        GridSolution

    Raises:
        BlowupError: If q <= 0 somewhere or characteristics have crossed
    """
    xs = np.asarray(x_grid, dtype=float)
    if t == 0:
        return GridSolution(0.0, xs, prof.value(xs), prof.derivative(xs), 1.0, np.ones(xs.size))

    lo, hi = prof.domain
    shots = max(min_shots, refine * xs.size)
    x0 = np.linspace(lo, hi, shots, endpoint=not prof.periodic)
    shift, V, q, u = propagate(sys, prof.value(x0), prof.derivative(x0), t)

    bad = np.flatnonzero(q <= 0)
    if bad.size:
        k = bad[np.argmin(q[bad])]
        raise BlowupError(f"q(t={t})={q[k]:.3e} <= 0 at x0={x0[k]:.6g}: gradient catastrophe reached")

    positions = x0 + shift
    if prof.periodic:
        L = prof.length
        copies = int(np.ceil(np.max(np.abs(shift)) / L)) + 1
        offsets = np.arange(-copies, copies + 1) * L
        positions = np.concatenate([positions + off for off in offsets])
        x0 = np.concatenate([x0 + off for off in offsets])
        V = np.tile(V, len(offsets))
        q = np.tile(q, len(offsets))
        u = np.tile(u, len(offsets))

    gaps = np.diff(positions)
    crossed = np.flatnonzero(gaps <= 0)
    if crossed.size:
        k = crossed[0]
        raise BlowupError(
            f"Characteristics from x0={x0[k]:.6g} and x0={x0[k + 1]:.6g} have crossed "
            f"by t={t} (arrivals {positions[k]:.6g} >= {positions[k + 1]:.6g})"
        )

    targets = prof.wrap(xs) if prof.periodic else xs
    # x0(x) is increasing; PCHIP keeps it so between shooting points
    start = PchipInterpolator(positions, x0, extrapolate=False)(targets)
    inside = np.isfinite(start)
    x0_t, goal = start[inside], targets[inside]
    lo_x0, hi_x0 = x0[0], x0[-1]

    def shoot(points):
        at = prof.wrap(points) if prof.periodic else np.clip(points, lo_x0, hi_x0)
        return propagate(sys, prof.value(at), prof.derivative(at), t)

    for _ in range(NEWTON_STEPS):
        shift_t, _, q_t, _ = shoot(x0_t)
        x0_t = np.clip(x0_t - (x0_t + shift_t - goal) / q_t, lo_x0, hi_x0)
    _, V_t, q_t, u_t = shoot(x0_t)

    n = V.shape[0]
    values = np.full((n, xs.size), np.nan)
    derivatives = np.full((n, xs.size), np.nan)
    jacobian = np.full(xs.size, np.nan)
    values[:, inside] = V_t
    derivatives[:, inside] = u_t / q_t
    jacobian[inside] = q_t

    logger.debug(f"grid_solution at t={t}: {positions.size} characteristics, min q={q.min():.4g}")
    return GridSolution(float(t), xs, values, derivatives, float(q.min()), jacobian)
