"""Adaptive quadrature for integrands with inverse-square-root endpoint singularities."""

from typing import Callable

import numpy as np
from scipy import integrate

from nonstrict.errors import QuadratureError
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

ROUNDOFF_MESSAGE = "The occurrence of roundoff error"


def quad_sqrt_singular(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    limit: int = 200,
    roundoff_rtol: float = 1e-6
) -> float:
    """
    Integral of f over [a, b] tolerating 1/sqrt singularities at both ends.

    The substitution x = a + (b - a) * sin(theta/2)**2, theta in [0, pi],
    turns an endpoint behaviour (x - a)**(-1/2) or (b - x)**(-1/2) into a
    bounded integrand, which is then handed to QUADPACK.

    Args:
        f: Integrand on (a, b)
        a: Lower limit
        b: Upper limit, b > a
        tol: Relative tolerance
        limit: Maximum number of subintervals
        roundoff_rtol: A roundoff report from QUADPACK is accepted when the
            error estimate is below this fraction of the result

    Returns:
        Integral estimate

    Raises:
        ValueError: If a >= b or tol <= 0
        QuadratureError: If the adaptive scheme does not converge
    """
    if not a < b:
        raise ValueError(f"Integration limits must satisfy a < b, got [{a}, {b}]")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    half_width = 0.5 * (b - a)

    def transformed(theta: float) -> float:
        x = a + (b - a) * np.sin(0.5 * theta) ** 2
        return f(x) * half_width * np.sin(theta)

    result = integrate.quad(
        transformed, 0.0, np.pi,
        epsabs=tol * 1e-3, epsrel=tol, limit=limit, full_output=1
    )
    estimate, abserr = float(result[0]), float(result[1])
    if len(result) > 3 and result[3].startswith(ROUNDOFF_MESSAGE) and abserr <= roundoff_rtol * abs(estimate):
        logger.debug(f"Roundoff reported on [{a}, {b}], accepting error {abserr:.1e} on {estimate:.12g}")
    elif len(result) > 3:
        raise QuadratureError(f"Quadrature on [{a}, {b}] did not converge: {result[3]}",
                              estimate, abserr)
    if not np.isfinite(estimate):
        raise QuadratureError(f"Quadrature on [{a}, {b}] is non-finite", estimate, abserr)

    logger.debug(f"quad_sqrt_singular on [{a:.6g}, {b:.6g}] = {estimate:.12g} (+/- {abserr:.1e})")
    return estimate
