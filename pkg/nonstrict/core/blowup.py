"""Gradient-catastrophe detection through the linearized derivative system."""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from nonstrict.core.system import InitialProfile, SystemSpec, augmented_matrix
from nonstrict.errors import NumericalError
from nonstrict.numkit.linalg import expm, propagator_rows
from nonstrict.numkit.roots import TOUCH, Root, first_root_in_samples, scan_grid
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_HORIZON = 100.0
DEFAULT_POINTS = 512
DEFAULT_TOL = 1e-10


class Verdict(str, Enum):
    GLOBALLY_SMOOTH = 'globally_smooth'
    BLOWS_UP = 'blows_up'


@dataclass
class BlowupReport:
    """
    Outcome of a q-scan over starting points.

    `per_point` pairs each x0 with its first root of q (None if q stays
    positive up to the horizon). `touch_points` lists the x0 whose first root
    is a tangential zero rather than a sign change.
    """

    verdict: Verdict
    t_star: Optional[float]
    x_star: Optional[float]
    per_point: List[Tuple[float, Optional[float]]]
    horizon: float
    touch_points: List[float] = field(default_factory=list)
    scan_step: Optional[float] = None
    tol: float = DEFAULT_TOL

    @property
    def blows_up(self) -> bool:
        return self.verdict == Verdict.BLOWS_UP

    def to_dict(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict.value,
            't_star': self.t_star,
            'x_star': self.x_star,
            'horizon': self.horizon,
            'scan_step': self.scan_step,
            'tol': self.tol,
            'touch_points': list(self.touch_points),
            'per_point': [{'x0': x0, 'first_root': root} for x0, root in self.per_point],
        }


def _q_function(M: np.ndarray, d0: np.ndarray):
    start = np.concatenate([[1.0], d0])

    def q(t: float) -> float:
        return float(expm(M, t)[0] @ start)

    return q


def scan_first_roots(
    sys: SystemSpec,
    derivs: np.ndarray,
    Tmax: float = DEFAULT_HORIZON,
    scan_step: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    workers: int = 1
) -> List[Optional[Root]]:
    """
    First roots of q(t; x0) for many initial derivative vectors.

    q is sampled for all points at once from the first row of exp(Mt) on the
    scan grid; refinement uses the exact exponential.

    Args:
        sys: System
        derivs: (n, P) initial derivatives V_0'(x0)
        Tmax: Horizon
        scan_step: Scan spacing (default Tmax/1e4)
        tol: Root tolerance
        workers: Threads used for per-point refinement

    Returns:
        One Root or None per column of derivs, in input order
    """
    if Tmax <= 0:
        raise ValueError(f"Tmax must be positive, got {Tmax}")
    M = augmented_matrix(sys)
    grid = scan_grid((0.0, Tmax), scan_step)
    rows = propagator_rows(M, 0, grid)
    starts = np.vstack([np.ones(derivs.shape[1]), derivs])
    samples = rows @ starts

    bad_t, bad_p = np.nonzero(~np.isfinite(samples))
    if bad_t.size:
        raise NumericalError(f"q is non-finite at scan point t={grid[bad_t[0]]!r} (column {bad_p[0]})")

    def solve(p: int) -> Optional[Root]:
        return first_root_in_samples(_q_function(M, derivs[:, p]), grid, samples[:, p], tol)

    indices = range(derivs.shape[1])
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(solve, indices))
    return [solve(p) for p in indices]


def q_first_root(
    sys: SystemSpec,
    prof: InitialProfile,
    x0: float,
    Tmax: float = DEFAULT_HORIZON,
    scan_step: Optional[float] = None,
    tol: float = DEFAULT_TOL
) -> Optional[float]:
    """
    First positive root of q(t; x0) on (0, Tmax].

    Returns:
        Root time, or None if q stays positive up to Tmax
    """
    if not prof.contains(x0):
        raise ValueError(f"x0={x0} outside profile domain {prof.domain}")
    root = scan_first_roots(sys, prof.derivative(np.array([x0])), Tmax, scan_step, tol)[0]
    return None if root is None else root.t


def default_workers() -> int:
    try:
        return max(1, int(os.getenv('NONSTRICT_WORKERS', '1')))
    except ValueError:
        return 1


def blowup_report(
    sys: SystemSpec,
    prof: InitialProfile,
    x0_grid: Optional[Sequence[float]] = None,
    Tmax: float = DEFAULT_HORIZON,
    scan_step: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    workers: Optional[int] = None
) -> BlowupReport:
    """
    Scan q over starting points and report the earliest blow-up.

    Args:
        sys: System
        prof: Initial profile
        x0_grid: Starting points (default: 512 uniform points on the domain)
        Tmax: Horizon; smoothness is certified only up to it
        scan_step: Scan spacing (default Tmax/1e4)
        tol: Root tolerance
        workers: Threads for refinement (default NONSTRICT_WORKERS)

    Returns:
        BlowupReport
    """
    if prof.n != sys.n:
        raise ValueError(f"Profile has {prof.n} components, system has {sys.n}")
    xs = prof.default_grid(DEFAULT_POINTS) if x0_grid is None else np.asarray(x0_grid, dtype=float)
    if xs.size == 0:
        raise ValueError("x0_grid must not be empty")
    outside = [x for x in xs if not prof.contains(x)]
    if outside:
        raise ValueError(f"x0={outside[0]} outside profile domain {prof.domain}")

    roots = scan_first_roots(sys, prof.derivative(xs), Tmax, scan_step, tol,
                             workers or default_workers())

    per_point = [(float(x), None if r is None else r.t) for x, r in zip(xs, roots)]
    touch_points = [float(x) for x, r in zip(xs, roots) if r is not None and r.kind == TOUCH]
    found = [(r.t, k) for k, r in enumerate(roots) if r is not None]

    if found:
        t_star, k_star = min(found)
        report = BlowupReport(Verdict.BLOWS_UP, t_star, float(xs[k_star]), per_point, Tmax,
                              touch_points, scan_step, tol)
    else:
        report = BlowupReport(Verdict.GLOBALLY_SMOOTH, None, None, per_point, Tmax,
                              touch_points, scan_step, tol)

    logger.debug(f"blowup_report: {len(found)}/{xs.size} points with a root, verdict {report.verdict.value}")
    return report
