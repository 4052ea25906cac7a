"""Phase-plane types and return-map periods of closed orbits."""

from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np
from scipy import optimize

from nonstrict.errors import NumericalError
from nonstrict.numkit.ode import Guard, OdeTrajectory, integrate_ode
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

CENTER = 'center'
SADDLE = 'saddle'
FOCUS = 'focus'
NODE = 'node'
DEGENERATE = 'degenerate'


class PhasePoint(NamedTuple):
    """A point (E, V) of a planar traveling-wave phase plane."""

    E: float
    V: float


@dataclass
class EquilibriumClass:
    """
    Linear classification of an equilibrium.

    `eigenvalues` are the roots of the characteristic polynomial.
    `reciprocal_roots` holds 1/lambda for the traveling-wave polynomials,
    the wavenumber form in which the inviscid roots read +-i*w.
    """

    kind: str
    eigenvalues: List[complex]
    reciprocal_roots: Optional[List[complex]] = None
    notes: dict = field(default_factory=dict)

    @property
    def periodic(self) -> bool:
        return self.kind == CENTER

    def to_dict(self):
        def pairs(values):
            return None if values is None else [[float(v.real), float(v.imag)] for v in values]
        return {
            'kind': self.kind,
            'periodic': self.periodic,
            'eigenvalues': pairs(self.eigenvalues),
            'reciprocal_roots': pairs(self.reciprocal_roots),
        }


def classify_eigenvalues(eigenvalues: Sequence[complex], rel_tol: float = 1e-12) -> str:
    """
    Kind of an equilibrium from its eigenvalues.

    center: all purely imaginary and non-zero; degenerate: a zero eigenvalue;
    focus: complex with non-zero real part; saddle: real parts of both
    signs; node: all real with one sign.
    """
    ev = np.asarray(eigenvalues, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(ev)))) if ev.size else 1.0
    tiny = rel_tol * scale
    if np.any(np.abs(ev) <= tiny):
        return DEGENERATE
    real = np.where(np.abs(ev.real) <= tiny, 0.0, ev.real)
    imag = np.where(np.abs(ev.imag) <= tiny, 0.0, ev.imag)
    if np.all(real == 0.0):
        return CENTER
    if np.any((imag != 0.0) & (real != 0.0)):
        return FOCUS
    if np.any(real > 0) and np.any(real < 0):
        return SADDLE
    return NODE


@dataclass
class OrbitPeriod:
    """Return time of an orbit to its starting section."""

    period: float
    closure_error: float
    trajectory: OdeTrajectory


def closed_orbit_period(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    start: Sequence[float],
    xi_max: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    guard: Optional[Guard] = None
) -> OrbitPeriod:
    """
    Period of the orbit through `start` from its first return to a section.

    The section is the hyperplane through `start` normal to the flow there;
    the return is the first crossing in the flow direction close to the
    start, refined by re-integrating from the last stored step.

    Args:
        rhs: Autonomous vector field f(xi, y)
        start: Point on the orbit
        xi_max: Longest parameter span to search
        rtol: Relative tolerance of the integration
        atol: Absolute tolerance of the integration
        guard: Optional singularity predicate

    Returns:
        OrbitPeriod with the trajectory over one period

    Raises:
        NumericalError: If the orbit does not return within xi_max
    """
    y0 = np.asarray(start, dtype=float)
    normal = np.asarray(rhs(0.0, y0), dtype=float)
    if not np.any(normal):
        raise ValueError(f"start {y0.tolist()} is an equilibrium")

    traj = integrate_ode(rhs, y0, (0.0, xi_max), rtol, atol, guard)
    offsets = traj.states - y0
    g = offsets @ normal
    dist = np.linalg.norm(offsets, axis=1)
    reach = np.maximum.accumulate(dist)

    for k in range(1, traj.params.size):
        if g[k - 1] < 0.0 <= g[k] and dist[k] < 0.5 * reach[k]:
            xi_k, y_k = traj.params[k - 1], traj.states[k - 1]

            def section(xi: float) -> float:
                if xi <= xi_k:
                    return float((y_k - y0) @ normal)
                piece = integrate_ode(rhs, y_k, (xi_k, xi), rtol, atol)
                return float((piece.final_state - y0) @ normal)

            period = optimize.brentq(section, xi_k, traj.params[k], xtol=1e-13, rtol=1e-15)
            tail = integrate_ode(rhs, y_k, (xi_k, period), rtol, atol) if period > xi_k else None
            end = tail.final_state if tail is not None else y_k
            closure = float(np.linalg.norm(end - y0))

            keep = traj.params < period
            params = np.append(traj.params[keep], period)
            states = np.vstack([traj.states[keep], end])
            slopes = np.vstack([traj.slopes[keep], np.asarray(rhs(period, end), dtype=float)])
            one_period = OdeTrajectory(params, states, slopes, traj.termination,
                                       traj.accepted_steps, traj.rejected_steps)
            logger.debug(f"Orbit closed after xi={period:.12g} (closure error {closure:.2e})")
            return OrbitPeriod(float(period), closure, one_period)

    raise NumericalError(
        f"Orbit from {y0.tolist()} did not return to its section within xi={traj.final_param:.6g} "
        f"({traj.termination.value})"
    )
