"""Simple waves V_i = V_i(V_1) and inviscid traveling waves V_i = V_i(x - wt)."""

from dataclasses import dataclass, field
from typing import Any, Dict, Sequence

import numpy as np

from nonstrict.core.system import SystemSpec
from nonstrict.numkit.ode import OdeTrajectory, Termination, integrate_ode
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

SINGULAR_REL = 1e-9


@dataclass(frozen=True)
class TravelingWaveProblem:
    """
    Traveling waves of a system with speed w.

    Attributes:
        sys: System
        w: Wave speed
        viscous_params: Model coefficients such as nu, kappa, mu, S0
    """

    sys: SystemSpec
    w: float
    viscous_params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(self.w):
            raise ValueError(f"Wave speed must be finite, got {self.w}")
        negative = [k for k, v in self.viscous_params.items() if v < 0]
        if negative:
            raise ValueError(f"Viscous coefficients must be non-negative: {', '.join(negative)}")


def _merge(backward: OdeTrajectory, forward: OdeTrajectory) -> OdeTrajectory:
    """Join a reversed backward branch and a forward branch sharing their first point."""
    params = np.concatenate([backward.params[:0:-1], forward.params])
    states = np.vstack([backward.states[:0:-1], forward.states])
    slopes = np.vstack([backward.slopes[:0:-1], forward.slopes])
    flags = {backward.termination, forward.termination}
    if Termination.SINGULARITY_DETECTED in flags:
        termination = Termination.SINGULARITY_DETECTED
    elif Termination.STEP_UNDERFLOW in flags:
        termination = Termination.STEP_UNDERFLOW
    else:
        termination = Termination.REACHED_END
    return OdeTrajectory(
        params, states, slopes, termination,
        backward.accepted_steps + forward.accepted_steps,
        backward.rejected_steps + forward.rejected_steps,
        notes={'backward': backward.termination.value, 'forward': forward.termination.value}
    )


def simple_wave_curve(
    sys: SystemSpec,
    v1_span: Sequence[float],
    seed: Sequence[float],
    rtol: float = 1e-10,
    atol: float = 1e-12
) -> OdeTrajectory:
    """
    Integrate the simple-wave curve dV_i/dV_1 = (QV)_i / (QV)_1 through a seed.

    The curve is followed from the seed's V_1 to both ends of v1_span; a
    branch stops with singularity_detected when (QV)_1 approaches zero.
    States hold the full vector (V_1, ..., V_n) against params = V_1.

    Args:
        sys: System
        v1_span: [a, b] containing the seed's V_1
        seed: Full state (V_1^0, ..., V_n^0)
        rtol: Relative tolerance
        atol: Absolute tolerance

    Returns:
        OdeTrajectory over V_1

    Raises:
        ValueError: Zero denominator at the seed, or seed outside v1_span
    """
    Q = np.asarray(sys.Q)
    y0 = np.asarray(seed, dtype=float)
    if y0.size != sys.n:
        raise ValueError(f"seed must have {sys.n} components, got {y0.size}")
    a, b = float(v1_span[0]), float(v1_span[1])
    if not a <= y0[0] <= b or a == b:
        raise ValueError(f"Seed V_1={y0[0]} must lie in v1_span [{a}, {b}]")

    qnorm = max(1.0, float(np.max(np.abs(Q))))

    def threshold(state: np.ndarray) -> float:
        return SINGULAR_REL * qnorm * max(1.0, float(np.max(np.abs(state))))

    denominator = float(Q[0] @ y0)
    if abs(denominator) <= threshold(y0):
        raise ValueError(f"Simple-wave denominator (QV)_1 vanishes at the seed {y0.tolist()}")

    def branch(direction: float, length: float) -> OdeTrajectory:
        # integrate in s with V_1 = V_1^0 + direction * s
        def rhs(s, tail):
            state = np.concatenate([[y0[0] + direction * s], tail])
            flux = Q @ state
            return direction * flux[1:] / flux[0]

        def guard(s, tail):
            state = np.concatenate([[y0[0] + direction * s], tail])
            return abs(Q[0] @ state) <= threshold(state)

        if length <= 0:
            return OdeTrajectory(np.array([0.0]), y0[1:][None, :], rhs(0.0, y0[1:])[None, :],
                                 Termination.REACHED_END)
        return integrate_ode(rhs, y0[1:], (0.0, length), rtol, atol, guard)

    def to_full(traj: OdeTrajectory, direction: float) -> OdeTrajectory:
        v1 = y0[0] + direction * traj.params
        states = np.column_stack([v1, traj.states])
        slopes = np.column_stack([np.ones_like(v1), direction * traj.slopes])
        return OdeTrajectory(v1, states, slopes, traj.termination,
                             traj.accepted_steps, traj.rejected_steps)

    forward = to_full(branch(1.0, b - y0[0]), 1.0)
    backward = to_full(branch(-1.0, y0[0] - a), -1.0)
    # backward params decrease; _merge reverses them
    curve = _merge(backward, forward)
    logger.debug(f"simple_wave_curve over V_1 in [{curve.params[0]:.6g}, {curve.params[-1]:.6g}]: "
                 f"{curve.termination.value}")
    return curve


def tw_inviscid(
    problem: TravelingWaveProblem,
    start: Sequence[float],
    xi_span: Sequence[float],
    rtol: float = 1e-10,
    atol: float = 1e-12
) -> OdeTrajectory:
    """
    Integrate dV/dxi = QV / (V_1 - w).

    Stops with singularity_detected when |V_1 - w| < 1e-9 * max(1, |w|).

    Raises:
        ValueError: If V_1 = w at the start
    """
    Q = np.asarray(problem.sys.Q)
    w = float(problem.w)
    y0 = np.asarray(start, dtype=float)
    if y0.size != problem.sys.n:
        raise ValueError(f"start must have {problem.sys.n} components, got {y0.size}")
    limit = SINGULAR_REL * max(1.0, abs(w))
    if abs(y0[0] - w) < limit:
        raise ValueError(f"V_1 equals the wave speed w={w} at the start")

    def rhs(xi, y):
        return (Q @ y) / (y[0] - w)

    def guard(xi, y):
        return abs(y[0] - w) < limit

    return integrate_ode(rhs, y0, xi_span, rtol, atol, guard)


def inviscid_vector_field(problem: TravelingWaveProblem):
    """The autonomous field of tw_inviscid, for period computations."""
    Q = np.asarray(problem.sys.Q)
    w = float(problem.w)
    return lambda xi, y: (Q @ y) / (y[0] - w)


def summary(traj: OdeTrajectory) -> Dict[str, Any]:
    return {
        'termination': traj.termination.value,
        'xi_start': float(traj.params[0]),
        'xi_end': traj.final_param,
        'steps': traj.accepted_steps,
    }
