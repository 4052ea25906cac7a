"""Viscous traveling waves and their linearization at the zero state."""

from typing import Callable, Dict, Optional, Sequence, Union

import numpy as np

from nonstrict.numkit.ode import OdeTrajectory, integrate_ode
from nonstrict.utils.logger import get_logger
from nonstrict.waves.phase_plane import EquilibriumClass, classify_eigenvalues
from nonstrict.waves.simple_waves import SINGULAR_REL

logger = get_logger(__name__)

COLD_PLASMA_VISCOUS = 'cold_plasma_viscous'
STRATIFIED = 'stratified'

# states beyond this magnitude are treated as a blow-up of the wave profile
RUNAWAY = 1e12


def tw_polynomial(model: str, nu: float, kappa: float, w: float) -> np.ndarray:
    """
    Characteristic polynomial coefficients, highest degree first.

    cold_plasma_viscous: nu*w*l^3 + w^2*l^2 + 1
    stratified:          nu*kappa*l^4 + (nu + kappa)*w*l^3 + w^2*l^2 + 1
    """
    if model == COLD_PLASMA_VISCOUS:
        return np.array([nu * w, w ** 2, 0.0, 1.0])
    if model == STRATIFIED:
        return np.array([nu * kappa, (nu + kappa) * w, w ** 2, 0.0, 1.0])
    raise ValueError(f"Unknown traveling-wave model: {model}")


def _sorted(values) -> list:
    return sorted((complex(v) for v in values), key=lambda z: (round(z.real, 12), z.imag))


def linearized_tw_roots(
    model: str,
    coeffs: Union[Dict[str, float], Sequence[float]],
    w: float
) -> EquilibriumClass:
    """
    Roots of the linearized traveling-wave equation and their classification.

    Args:
        model: 'cold_plasma_viscous' or 'stratified'
        coeffs: {'nu': ..., 'kappa': ...} or (nu,) / (nu, kappa)
        w: Wave speed, non-zero

    Returns:
        EquilibriumClass; kind 'center' (periodic) when every root is purely
        imaginary, which happens exactly when all viscosities vanish

    Raises:
        ValueError: w = 0, negative coefficients or unknown model
    """
    if w == 0:
        raise ValueError("Wave speed w must be non-zero")
    if isinstance(coeffs, dict):
        nu = float(coeffs.get('nu', 0.0))
        kappa = float(coeffs.get('kappa', 0.0))
    else:
        values = list(coeffs) + [0.0, 0.0]
        nu, kappa = float(values[0]), float(values[1])
    if nu < 0 or kappa < 0:
        raise ValueError(f"Viscous coefficients must be non-negative (nu={nu}, kappa={kappa})")

    poly = np.trim_zeros(tw_polynomial(model, nu, kappa, w), 'f')
    roots = _sorted(np.roots(poly))
    kind = classify_eigenvalues(roots)
    reciprocal = _sorted(1.0 / r for r in roots)
    logger.debug(f"{model} roots at w={w}, nu={nu}, kappa={kappa}: {roots} ({kind})")
    return EquilibriumClass(kind, roots, reciprocal,
                            notes={'model': model, 'nu': nu, 'kappa': kappa, 'w': w})


def linear_tw_solution(roots: Sequence[complex], initial: Sequence[float]) -> Callable:
    """
    Real solution sum_k c_k exp(l_k xi) of the linear equation with given roots.

    Args:
        roots: Distinct characteristic roots
        initial: Initial derivatives (v(0), v'(0), ..., v^(m-1)(0)), m = len(roots)

    Returns:
        Vectorized function xi -> v(xi)
    """
    lam = np.asarray(roots, dtype=complex)
    init = np.asarray(initial, dtype=float)
    if init.size != lam.size:
        raise ValueError(f"Need {lam.size} initial derivatives, got {init.size}")
    vandermonde = np.vander(lam, increasing=True).T
    c = np.linalg.solve(vandermonde, init.astype(complex))

    def solution(xi):
        xi = np.asarray(xi, dtype=float)
        return np.real(np.exp(np.multiply.outer(xi, lam)) @ c)

    return solution


def _runaway(y: np.ndarray) -> bool:
    return float(np.max(np.abs(y))) > RUNAWAY


def tw_viscous_coldplasma(
    nu: float,
    w: float,
    V0: float,
    V0p: float,
    V0pp: float = 0.0,
    xi_span: Sequence[float] = (0.0, 2000.0),
    rtol: float = 1e-10,
    atol: float = 1e-12
) -> OdeTrajectory:
    """
    Integrate nu V''' = (V - w) V'' + V'^2 + V / (V - w) in (V, V', V'').

    The run stops with singularity_detected when V comes within
    1e-9 * max(1, |w|) of w or the profile runs away.

    Raises:
        ValueError: nu <= 0 (use tw_inviscid for nu = 0) or V0 = w
    """
    if nu == 0:
        raise ValueError("nu = 0 degenerates the viscous equation; use the inviscid traveling wave")
    if nu < 0:
        raise ValueError(f"nu must be positive, got {nu}")
    limit = SINGULAR_REL * max(1.0, abs(w))
    if abs(V0 - w) < limit:
        raise ValueError(f"V(0) equals the wave speed w={w}")

    def rhs(xi, y):
        V, dV, ddV = y
        shifted = V - w
        return np.array([dV, ddV, (shifted * ddV + dV * dV + V / shifted) / nu])

    def guard(xi, y):
        return abs(y[0] - w) < limit or _runaway(y)

    traj = integrate_ode(rhs, [V0, V0p, V0pp], xi_span, rtol, atol, guard)
    logger.debug(f"Viscous cold-plasma wave (nu={nu}, w={w}) ended at xi={traj.final_param:.6g}: "
                 f"{traj.termination.value}")
    return traj


def tw_stratified(
    nu: float,
    kappa: float,
    w: float,
    start: Sequence[float],
    xi_span: Sequence[float],
    rtol: float = 1e-10,
    atol: float = 1e-12
) -> OdeTrajectory:
    """
    Nonlinear stratified-fluid traveling wave in (V, V', S, S').

    Integrates nu V'' = (V - w) V' + S and kappa S'' = (V - w) S' - V.
    Best effort: the system has no singular set, so the run only stops early
    on runaway growth.

    Raises:
        ValueError: If nu or kappa is not positive
    """
    if nu <= 0 or kappa <= 0:
        raise ValueError(f"nu and kappa must be positive (nu={nu}, kappa={kappa})")
    y0 = np.asarray(start, dtype=float)
    if y0.size != 4:
        raise ValueError(f"start must be (V, V', S, S'), got {y0.size} values")

    def rhs(xi, y):
        V, dV, S, dS = y
        shifted = V - w
        return np.array([dV, (shifted * dV + S) / nu, dS, (shifted * dS - V) / kappa])

    def guard(xi, y):
        return _runaway(y)

    return integrate_ode(rhs, y0, xi_span, rtol, atol, guard)


def discriminant(poly: Sequence[float]) -> Optional[float]:
    """
    Discriminant of a cubic or quartic given highest degree first.

    Returns None for other degrees.
    """
    p = [float(c) for c in poly]
    if len(p) == 4:
        a, b, c, d = p
        return b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d
    if len(p) == 5:
        a, b, c, d, e = p
        return (256 * a ** 3 * e ** 3 - 192 * a ** 2 * b * d * e ** 2 - 128 * a ** 2 * c ** 2 * e ** 2
                + 144 * a ** 2 * c * d ** 2 * e - 27 * a ** 2 * d ** 4 + 144 * a * b ** 2 * c * e ** 2
                - 6 * a * b ** 2 * d ** 2 * e - 80 * a * b * c ** 2 * d * e + 18 * a * b * c * d ** 3
                + 16 * a * c ** 4 * e - 4 * a * c ** 3 * d ** 2 - 27 * b ** 4 * e ** 2
                + 18 * b ** 3 * c * d * e - 4 * b ** 3 * d ** 3 - 4 * b ** 2 * c ** 3 * e
                + b ** 2 * c ** 2 * d ** 2)
    return None
