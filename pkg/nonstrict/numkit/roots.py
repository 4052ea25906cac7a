"""First-root scanning with bracketed refinement."""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize

from nonstrict.errors import NumericalError
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

CROSSING = 'crossing'
TOUCH = 'touch'


@dataclass(frozen=True)
class Root:
    """A located zero of a scalar function."""

    t: float
    kind: str  # CROSSING or TOUCH


def scan_grid(span: Sequence[float], scan_step: Optional[float] = None) -> np.ndarray:
    """
    Uniform scan grid over span.

    Args:
        span: Interval [lo, hi]
        scan_step: Grid spacing upper bound (default (hi-lo)/1e4)

    Returns:
        Grid including both endpoints
    """
    lo, hi = float(span[0]), float(span[1])
    if not hi > lo:
        raise ValueError(f"span must satisfy lo < hi, got [{lo}, {hi}]")
    if scan_step is None:
        scan_step = (hi - lo) / 1e4
    if scan_step <= 0:
        raise ValueError(f"scan_step must be positive, got {scan_step}")
    count = max(1, int(np.ceil((hi - lo) / scan_step - 1e-9)))
    return np.linspace(lo, hi, count + 1)


def _refine_dip(f, left: float, right: float, sign: float, tol: float):
    """Locate the extremum of f closest to zero inside [left, right]."""
    res = optimize.minimize_scalar(
        lambda s: sign * f(s),
        bounds=(left, right),
        method='bounded',
        options={'xatol': max(tol, 1e-12)}
    )
    return float(res.x), float(f(res.x))


def first_root_in_samples(
    f: Callable[[float], float],
    grid: np.ndarray,
    values: np.ndarray,
    tol: float
) -> Optional[Root]:
    """
    First zero of f given its values on an increasing grid.

    Sign changes between samples are refined by bisection to width tol.
    Samples with |f| < tol are zeros. Interior local minima of |f| whose
    parabolic vertex comes within one second difference of zero are refined
    by bounded minimization; a refined value below tol is a tangential zero
    and a refined value of opposite sign is a dip with a crossing inside.
    The value at grid[0] is a zero only if |f(grid[0])| <= tol.

    Args:
        f: Scalar function used for refinement
        grid: Increasing sample points
        values: f evaluated on grid
        tol: Zero tolerance and bisection width

    Returns:
        The earliest Root, or None when f keeps its sign on the grid
    """
    grid = np.asarray(grid, dtype=float)
    v = np.asarray(values, dtype=float)
    if abs(v[0]) <= tol:
        return Root(float(grid[0]), TOUCH)

    m = v.size
    small = np.abs(v) < tol
    small[0] = False
    crossing = np.zeros(m, dtype=bool)
    crossing[:-1] = (v[:-1] * v[1:] < 0) & ~small[1:]

    dip = np.zeros(m, dtype=bool)
    if m >= 3:
        prev, mid, nxt = v[:-2], v[1:-1], v[2:]
        curvature = prev - 2.0 * mid + nxt
        with np.errstate(divide='ignore', invalid='ignore'):
            vertex = np.where(curvature != 0.0,
                              mid - (nxt - prev) ** 2 / (8.0 * curvature), mid)
        dip[1:-1] = ((prev * mid > 0) & (nxt * mid > 0)
                     & (np.abs(mid) <= np.abs(prev)) & (np.abs(mid) <= np.abs(nxt))
                     & (np.abs(vertex) <= np.maximum(10.0 * tol, np.abs(curvature))))

    for k in np.flatnonzero(small | crossing | dip):
        if small[k]:
            after = v[k + 1] if k + 1 < m else v[k]
            kind = CROSSING if v[k - 1] * after < 0 else TOUCH
            return Root(float(grid[k]), kind)

        if dip[k]:
            sign = 1.0 if v[k] > 0 else -1.0
            t_min, f_min = _refine_dip(f, grid[k - 1], grid[k + 1], sign, tol)
            if abs(f_min) < tol:
                logger.debug(f"Tangential zero refined at t={t_min:.12g}")
                return Root(t_min, TOUCH)
            if f_min * v[k] < 0:
                t_root = optimize.bisect(f, grid[k - 1], t_min, xtol=tol)
                logger.debug(f"Dip crossing refined at t={t_root:.12g}")
                return Root(float(t_root), CROSSING)

        if crossing[k]:
            t_root = optimize.bisect(f, grid[k], grid[k + 1], xtol=tol)
            return Root(float(t_root), CROSSING)

    return None


def locate_first_root(
    f: Callable[[float], float],
    span: Sequence[float],
    scan_step: Optional[float] = None,
    tol: float = 1e-10
) -> Optional[Root]:
    """
    Like find_first_root but returns the Root with its kind.

    Raises:
        NumericalError: If f is non-finite at a scan point
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    grid = scan_grid(span, scan_step)
    values = np.array([f(t) for t in grid], dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise NumericalError(f"f is non-finite at scan point t={grid[bad[0]]!r}")
    return first_root_in_samples(f, grid, values, tol)


def find_first_root(
    f: Callable[[float], float],
    span: Sequence[float],
    scan_step: Optional[float] = None,
    tol: float = 1e-10
) -> Optional[float]:
    """
    Smallest root of f on span.

    Args:
        f: Continuous scalar function
        span: Interval [0, Tmax]
        scan_step: Scan spacing (default Tmax/1e4)
        tol: Zero tolerance and bisection width

    Returns:
        Root location, or None if f has no zero on the span
    """
    root = locate_first_root(f, span, scan_step, tol)
    return None if root is None else root.t
