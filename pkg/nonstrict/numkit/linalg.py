"""Dense small-matrix helpers."""

import numpy as np
from scipy import linalg as sla

from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)


def as_matrix(M, name: str = 'matrix') -> np.ndarray:
    """
    Convert input to a finite 2-D float array.

    Args:
        M: Nested sequence or array
        name: Name used in error messages

    Returns:
        Float array of shape (rows, cols)

    Raises:
        ValueError: If M is not 2-D, empty or contains non-finite entries
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def expm(M, t: float = 1.0) -> np.ndarray:
    """
    Matrix exponential exp(M t).

    Uses scaling and squaring with a Pade core (scipy.linalg.expm).

    Args:
        M: Square matrix
        t: Finite time (scale factor)

    Returns:
        exp(M t) as a new array

    Raises:
        ValueError: If M is not square or has non-finite entries, or t is not finite
    """
    A = as_matrix(M, 'M')
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"M must be square, got shape {A.shape}")
    if not np.isfinite(t):
        raise ValueError(f"t must be finite, got {t}")
    return sla.expm(A * float(t))


def propagator_rows(M, row: int, times: np.ndarray, anchor_every: int = 256) -> np.ndarray:
    """
    Rows e_row^T exp(M t_k) for an increasing uniform time grid.

    Propagates with the one-step exponential and re-anchors on the exact
    exponential every `anchor_every` steps so rounding stays bounded.

    Args:
        M: Square matrix
        row: Row index to extract
        times: Uniformly spaced times starting at times[0]
        anchor_every: Steps between exact re-anchoring

    Returns:
        Array of shape (len(times), n) whose k-th row is e_row^T exp(M t_k)
    """
    A = as_matrix(M, 'M')
    n = A.shape[0]
    times = np.asarray(times, dtype=float)
    out = np.empty((times.size, n))
    if times.size == 0:
        return out

    dt = times[1] - times[0] if times.size > 1 else 0.0
    step = sla.expm(A * dt)
    current = sla.expm(A * times[0])[row].copy()
    out[0] = current
    for k in range(1, times.size):
        if k % anchor_every == 0:
            current = sla.expm(A * times[k])[row].copy()
        else:
            current = current @ step
        out[k] = current
    return out
