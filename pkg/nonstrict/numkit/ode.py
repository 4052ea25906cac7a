"""Explicit adaptive ODE integration with an embedded Runge-Kutta pair."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from nonstrict.errors import NumericalError
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

VectorField = Callable[[float, np.ndarray], np.ndarray]
Guard = Callable[[float, np.ndarray], bool]


class Termination(str, Enum):
    """Reason an integration stopped."""

    REACHED_END = 'reached_end'
    SINGULARITY_DETECTED = 'singularity_detected'
    STEP_UNDERFLOW = 'step_underflow'


class DormandPrince54:
    """Dormand-Prince 5(4) pair, 7 stages, first-same-as-last."""

    order = 5
    error_order = 4

    # stage nodes
    C = np.array([0.0, 1/5, 3/10, 4/5, 8/9, 1.0, 1.0])

    # extended butcher table
    A = [
        [],
        [1/5],
        [3/40, 9/40],
        [44/45, -56/15, 32/9],
        [19372/6561, -25360/2187, 64448/6561, -212/729],
        [9017/3168, -355/33, 46732/5247, 49/176, -5103/18656],
        [35/384, 0.0, 500/1113, 125/192, -2187/6784, 11/84],
    ]

    # propagating weights (5th order)
    B = np.array([35/384, 0.0, 500/1113, 125/192, -2187/6784, 11/84, 0.0])

    # 5th minus embedded 4th order weights
    E = np.array([71/57600, 0.0, -71/16695, 71/1920, -17253/339200, 22/525, -1/40])

    def step(self, rhs: VectorField, t: float, y: np.ndarray, f: np.ndarray, h: float):
        """
        Take one trial step.

        Args:
            rhs: Vector field f(t, y)
            t: Current parameter
            y: Current state
            f: Slope at (t, y)
            h: Step size

        Returns:
            Tuple (y_new, f_new, error_vector)
        """
        K = np.empty((7, y.size))
        K[0] = f
        for i in range(1, 7):
            dy = h * np.dot(self.A[i], K[:i])
            K[i] = rhs(t + self.C[i] * h, y + dy)
        y_new = y + h * np.dot(self.B, K)
        # FSAL: the last stage is evaluated at (t + h, y_new)
        return y_new, K[6], h * np.dot(self.E, K)


@dataclass
class OdeTrajectory:
    """A sampled ODE trajectory with its slopes and termination flag."""

    params: np.ndarray
    states: np.ndarray
    slopes: np.ndarray
    termination: Termination
    accepted_steps: int = 0
    rejected_steps: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def final_param(self) -> float:
        return float(self.params[-1])

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def reached_end(self) -> bool:
        return self.termination == Termination.REACHED_END

    def sample(self, params: Sequence[float]) -> np.ndarray:
        """
        Resample the trajectory by cubic Hermite interpolation of stored slopes.

        Args:
            params: Parameter values inside [params[0], params[-1]]

        Returns:
            Array of shape (len(params), dim)
        """
        query = np.atleast_1d(np.asarray(params, dtype=float))
        lo, hi = self.params[0], self.params[-1]
        span = max(1.0, abs(hi - lo))
        if np.any(query < lo - 1e-12 * span) or np.any(query > hi + 1e-12 * span):
            raise ValueError(f"Sample parameters must lie in [{lo}, {hi}]")
        if self.params.size == 1:
            return np.repeat(self.states[:1], query.size, axis=0)
        spline = CubicHermiteSpline(self.params, self.states, self.slopes, axis=0)
        return spline(np.clip(query, lo, hi))


def _initial_step(rhs, t0, y0, f0, direction_span, rtol, atol, order):
    """Starting step size heuristic (Hairer, Norsett and Wanner)."""
    scale = atol + np.abs(y0) * rtol
    d0 = np.max(np.abs(y0) / scale)
    d1 = np.max(np.abs(f0) / scale)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, direction_span)

    y1 = y0 + h0 * f0
    f1 = rhs(t0 + h0, y1)
    if not np.all(np.isfinite(f1)):
        return h0 * 1e-3
    d2 = np.max(np.abs(f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / (order + 1))
    return min(100 * h0, h1, direction_span)


def integrate_ode(
    rhs: VectorField,
    y0: Sequence[float],
    span: Sequence[float],
    rtol: float = 1e-8,
    atol: float = 1e-10,
    guard: Optional[Guard] = None,
    max_step: Optional[float] = None,
    max_steps: int = 2_000_000
) -> OdeTrajectory:
    """
    Integrate y' = rhs(t, y) over span with adaptive Dormand-Prince steps.

    Local error per step is kept below atol + rtol*|y| componentwise. The
    run stops early when `guard(t, y)` returns True or the integration
    produces non-finite values (singularity_detected), or when the step
    falls below 1e-12*(b-a) (step_underflow).

    Args:
        rhs: Vector field f(t, y) returning an array like y
        y0: Initial state
        span: Interval [a, b] with a < b
        rtol: Relative tolerance
        atol: Absolute tolerance
        guard: Optional singularity predicate
        max_step: Optional upper bound on the step size
        max_steps: Upper bound on accepted plus rejected steps

    Returns:
        OdeTrajectory with every accepted step stored

    Raises:
        ValueError: On an invalid span or tolerances
        NumericalError: If rhs is non-finite at y0 or max_steps is exceeded
    """
    a, b = float(span[0]), float(span[1])
    if not (np.isfinite(a) and np.isfinite(b)) or a >= b:
        raise ValueError(f"span must satisfy a < b, got [{a}, {b}]")
    if rtol <= 0 or atol <= 0:
        raise ValueError(f"Tolerances must be positive (rtol={rtol}, atol={atol})")

    y = np.array(y0, dtype=float).ravel()
    t = a
    f = np.asarray(rhs(t, y), dtype=float)
    if f.shape != y.shape or not np.all(np.isfinite(f)):
        raise NumericalError(f"Vector field is non-finite at the initial state y0={y.tolist()}")

    params = [t]
    states = [y.copy()]
    slopes = [f.copy()]

    if guard is not None and guard(t, y):
        logger.debug(f"Guard fired at the initial state t={t}")
        return OdeTrajectory(np.array(params), np.array(states), np.array(slopes),
                             Termination.SINGULARITY_DETECTED)

    scheme = DormandPrince54()
    h_min = 1e-12 * (b - a)
    h_max = (b - a) if max_step is None else min(float(max_step), b - a)
    h = min(_initial_step(rhs, t, y, f, b - a, rtol, atol, scheme.error_order), h_max)
    exponent = -1.0 / (scheme.error_order + 1)

    accepted = 0
    rejected = 0
    termination = Termination.REACHED_END
    saw_nonfinite = False

    while t < b:
        if accepted + rejected >= max_steps:
            raise NumericalError(f"integrate_ode exceeded {max_steps} steps at t={t}")

        last = t + h >= b
        if last:
            h = b - t

        if h < h_min and not last:
            termination = (Termination.SINGULARITY_DETECTED if saw_nonfinite
                           else Termination.STEP_UNDERFLOW)
            logger.debug(f"Step size {h:.3e} below {h_min:.3e} at t={t}")
            break

        with np.errstate(all='ignore'):
            y_new, f_new, err = scheme.step(rhs, t, y, f, h)

        if not (np.all(np.isfinite(y_new)) and np.all(np.isfinite(f_new))
                and np.all(np.isfinite(err))):
            saw_nonfinite = True
            rejected += 1
            h *= 0.25
            continue

        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = float(np.max(np.abs(err) / scale))

        if err_norm <= 1.0:
            t = b if last else t + h
            y = y_new
            f = f_new
            accepted += 1
            saw_nonfinite = False
            params.append(t)
            states.append(y.copy())
            slopes.append(f.copy())

            if guard is not None and guard(t, y):
                termination = Termination.SINGULARITY_DETECTED
                logger.debug(f"Guard fired at t={t}")
                break

            factor = 5.0 if err_norm == 0.0 else min(5.0, max(0.2, 0.9 * err_norm ** exponent))
            h = min(h * factor, h_max)
        else:
            rejected += 1
            h *= max(0.2, 0.9 * err_norm ** exponent)

    logger.debug(
        f"integrate_ode finished: {termination.value} at t={t:.6g} "
        f"({accepted} accepted, {rejected} rejected)"
    )
    return OdeTrajectory(
        params=np.array(params),
        states=np.array(states),
        slopes=np.array(slopes),
        termination=termination,
        accepted_steps=accepted,
        rejected_steps=rejected
    )
