"""Traveling waves of the blood-flow model in the (E, V) phase plane."""

import math
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from nonstrict.numkit.ode import OdeTrajectory, integrate_ode
from nonstrict.numkit.quadrature import quad_sqrt_singular
from nonstrict.utils.logger import get_logger
from nonstrict.waves.phase_plane import (
    CENTER,
    DEGENERATE,
    SADDLE,
    EquilibriumClass,
    OrbitPeriod,
    PhasePoint,
    closed_orbit_period,
)

logger = get_logger(__name__)

POLE_TOL = 1e-12
SCAN_DIVISIONS = 256
MAX_SCAN_STEPS = 100_000


def _check_params(mu: float, S0: float, w: float) -> None:
    if mu <= 0 or S0 <= 0:
        raise ValueError(f"mu and S0 must be positive (mu={mu}, S0={S0})")
    if w == 0 or not math.isfinite(w):
        raise ValueError(f"Wave speed must be finite and non-zero, got {w}")


def bloodflow_rhs(mu: float, S0: float, w: float, p: PhasePoint) -> Tuple[float, float]:
    """
    (dE/dxi, dV/dxi) = (-S0 V / (V - w), E (V - w)^2 / ((V - w)^3 + mu w S0)).

    Raises:
        ValueError: If V - w or (V - w)^3 + mu w S0 is within 1e-12 of zero
    """
    E, V = float(p[0]), float(p[1])
    shifted = V - w
    denominator = shifted ** 3 + mu * w * S0
    if abs(shifted) < POLE_TOL or abs(denominator) < POLE_TOL:
        raise ValueError(f"Blood-flow field is singular at (E, V)=({E}, {V})")
    return -S0 * V / shifted, E * shifted ** 2 / denominator


def vector_field(mu: float, S0: float, w: float):
    """Array form of bloodflow_rhs for the integrator (nan at the poles)."""

    def rhs(xi, y):
        E, V = y
        shifted = V - w
        denominator = shifted ** 3 + mu * w * S0
        if abs(shifted) < POLE_TOL or abs(denominator) < POLE_TOL:
            return np.array([np.nan, np.nan])
        return np.array([-S0 * V / shifted, E * shifted ** 2 / denominator])

    return rhs


def singular_guard(mu: float, S0: float, w: float):
    limit = 1e-9 * max(1.0, abs(w))

    def guard(xi, y):
        shifted = y[1] - w
        return abs(shifted) < limit or abs(shifted ** 3 + mu * w * S0) < limit

    return guard


def potential(mu: float, S0: float, w: float, V):
    """G(V) = S0 V^2 - w mu S0^2 (2V - w) / (V - w)^2, so that Psi = E^2 + G(V)."""
    V = np.asarray(V, dtype=float)
    return S0 * V ** 2 - w * mu * S0 ** 2 * (2 * V - w) / (V - w) ** 2


def bloodflow_psi(mu: float, S0: float, w: float, p: PhasePoint) -> float:
    """
    First integral Psi = E^2 + S0 V^2 - w mu S0^2 (2V - w) / (V - w)^2.

    Raises:
        ValueError: If V = w
    """
    E, V = float(p[0]), float(p[1])
    if abs(V - w) < POLE_TOL:
        raise ValueError(f"Psi is undefined at V = w = {w}")
    return E * E + float(potential(mu, S0, w, V))


def bloodflow_classify(mu: float, S0: float, w: float) -> EquilibriumClass:
    """
    Linear type of the origin: center for w^2 > mu S0, saddle for w^2 < mu S0.

    The Jacobian at the origin is [[0, S0/w], [w/(mu S0 - w^2), 0]].
    """
    _check_params(mu, S0, w)
    gap = mu * S0 - w * w
    if abs(gap) <= 1e-12 * max(1.0, w * w):
        return EquilibriumClass(DEGENERATE, [0j, 0j], notes={'lambda_squared': math.inf})
    lam_sq = S0 / gap
    if lam_sq < 0:
        root = complex(0.0, math.sqrt(-lam_sq))
        kind = CENTER
    else:
        root = complex(math.sqrt(lam_sq), 0.0)
        kind = SADDLE
    return EquilibriumClass(kind, [-root, root], notes={'lambda_squared': lam_sq})


def bloodflow_band_edge(mu: float, S0: float, w: float) -> float:
    """Edge w - (mu S0 w)^(1/3) of the band of starting values with closed orbits."""
    return float(w - np.cbrt(mu * S0 * w))


def small_amplitude_period(mu: float, S0: float, w: float) -> float:
    """2 pi / omega for the center eigenvalues +-i omega."""
    eq = bloodflow_classify(mu, S0, w)
    if eq.kind != CENTER:
        raise ValueError(f"Origin is a {eq.kind}, not a center (w^2 must exceed mu S0)")
    return 2 * math.pi / abs(eq.eigenvalues[1].imag)


def _scan(h, start: float, direction: float, step_of, stop: Optional[float]):
    """Walk from start in direction until h changes sign; bracket or None."""
    a = start
    ha = h(a)
    for _ in range(MAX_SCAN_STEPS):
        b = a + direction * step_of(a)
        if stop is not None and (b - stop) * direction >= 0:
            b = stop
        hb = h(b)
        if ha * hb <= 0:
            return a, b
        if b == stop:
            return None
        a, ha = b, hb
    return None


def bloodflow_turning_points(
    mu: float,
    S0: float,
    w: float,
    Psi0: float,
    closed: bool = True
) -> Tuple[Optional[float], Optional[float]]:
    """
    Turning points V- < 0 < V+ of the level set Psi = Psi0 closest to zero.

    Roots of G(V) = Psi0 are bracketed by scanning outward from 0 (steps
    (|w| - |V|)/256 toward the pole, (|w| + |V|)/256 away from it) and
    refined with Brent's method. On the pole side the scan stops at the band
    edge, where G has its local maximum.

    Args:
        mu: Wall parameter
        S0: Unperturbed cross-section
        w: Wave speed (center regime)
        Psi0: Level of the first integral
        closed: Require both turning points; otherwise a missing one is None

    Returns:
        (V-, V+)

    Raises:
        ValueError: Psi0 below the minimum, or no turning point toward the pole when closed
    """
    _check_params(mu, S0, w)
    g0 = float(potential(mu, S0, w, 0.0))
    if abs(Psi0 - g0) <= 1e-12 * max(1.0, abs(g0)):
        return 0.0, 0.0
    if Psi0 < g0:
        raise ValueError(f"Psi0={Psi0} is below the equilibrium level {g0}")

    def h(V):
        return float(potential(mu, S0, w, V)) - Psi0

    toward = math.copysign(1.0, w)
    speed = abs(w)
    edge = bloodflow_band_edge(mu, S0, w)

    pole_bracket = _scan(h, 0.0, toward, lambda V: (speed - abs(V)) / SCAN_DIVISIONS, edge)
    far_bracket = _scan(h, 0.0, -toward, lambda V: (speed + abs(V)) / SCAN_DIVISIONS, None)

    def refine(bracket):
        lo, hi = sorted(bracket)
        return float(optimize.brentq(h, lo, hi, xtol=1e-15, rtol=1e-15))

    pole_root = refine(pole_bracket) if pole_bracket else None
    far_root = refine(far_bracket) if far_bracket else None
    if closed and (pole_root is None or far_root is None):
        raise ValueError(f"Level Psi0={Psi0} has no turning point before the band edge {edge:.6g}: "
                         "the orbit is not closed")

    if toward > 0:
        return far_root, pole_root
    return pole_root, far_root


def level_gap_factor(mu: float, S0: float, w: float, r: float, V):
    """
    h_r(V) with G(r) - G(V) = (r - V) h_r(V), free of cancellation near V = r.

    h_r(V) = S0 (r + V) + w mu S0^2 (2 r V - w (r + V)) / ((r - w)^2 (V - w)^2).
    """
    V = np.asarray(V, dtype=float)
    a2b2 = (r - w) ** 2 * (V - w) ** 2
    return S0 * (r + V) + w * mu * S0 ** 2 * (2 * r * V - w * (r + V)) / a2b2


def _opposite_turning_point(mu: float, S0: float, w: float, r: float, approx: float) -> float:
    """Zero of h_r next to approx, the turning point across the well from r."""

    def h(V):
        return float(level_gap_factor(mu, S0, w, r, V))

    direction = math.copysign(1.0, approx - r)
    span = abs(approx - r)
    stop = approx + 0.5 * direction * span
    if direction * w > 0:
        edge = bloodflow_band_edge(mu, S0, w)
        stop = min(stop, edge) if direction > 0 else max(stop, edge)
    bracket = _scan(h, r, direction, lambda V: span / SCAN_DIVISIONS, stop)
    if bracket is None:
        return approx
    lo, hi = sorted(bracket)
    return float(optimize.brentq(h, lo, hi, xtol=1e-15, rtol=1e-15))


def bloodflow_period(
    mu: float,
    S0: float,
    w: float,
    p0: PhasePoint,
    tol: float = 1e-10
) -> float:
    """
    Period in xi of the closed orbit through p0.

    L = 2 * integral over [V-, V+] of |(V - w)^3 + mu w S0| / ((V - w)^2 E(V)) dV,
    E(V)^2 = G(r) - G(V) = (r - V) h_r(V) for a turning point r, evaluated
    with quad_sqrt_singular.
    The orbit through the origin returns the small-amplitude limit 2 pi / omega.

    Raises:
        ValueError: Not a center, or p0 not on a closed orbit
        QuadratureError: If the quadrature fails
    """
    small = small_amplitude_period(mu, S0, w)
    E0, V0 = float(p0[0]), float(p0[1])
    Psi0 = bloodflow_psi(mu, S0, w, p0)
    v_minus, v_plus = bloodflow_turning_points(mu, S0, w, Psi0)
    if v_minus == v_plus == 0.0:
        return small

    span = v_plus - v_minus
    if not v_minus - 1e-9 * span <= V0 <= v_plus + 1e-9 * span:
        raise ValueError(
            f"p0=({E0}, {V0}) is not on the closed orbit between turning points "
            f"[{v_minus:.6g}, {v_plus:.6g}]; periodic band edge is {bloodflow_band_edge(mu, S0, w):.6g}"
        )

    # A start with E = 0 is an exact turning point; the scan only brackets it
    r = V0 if E0 == 0.0 and V0 != 0.0 else v_plus
    other = _opposite_turning_point(mu, S0, w, r, v_minus if r > 0 else v_plus)
    v_minus, v_plus = sorted((r, other))

    def integrand(V):
        shifted = V - w
        gap = (r - V) * float(level_gap_factor(mu, S0, w, r, V))
        if gap <= 0.0:
            return 0.0
        return abs(shifted ** 3 + mu * w * S0) / (shifted ** 2 * math.sqrt(gap))

    L = 2.0 * quad_sqrt_singular(integrand, v_minus, v_plus, tol)
    logger.debug(f"Blood-flow period through ({E0}, {V0}) at w={w}: L={L:.12g}")
    return L


def bloodflow_orbit(
    mu: float,
    S0: float,
    w: float,
    p0: PhasePoint,
    xi_span,
    rtol: float = 1e-10,
    atol: float = 1e-12
) -> OdeTrajectory:
    """Integrate the phase-plane field from p0, stopping near the poles."""
    _check_params(mu, S0, w)
    return integrate_ode(vector_field(mu, S0, w), [p0[0], p0[1]], xi_span, rtol, atol,
                         singular_guard(mu, S0, w))


def bloodflow_orbit_period(
    mu: float,
    S0: float,
    w: float,
    p0: PhasePoint,
    xi_max: float = 1000.0,
    rtol: float = 1e-11,
    atol: float = 1e-13
) -> OrbitPeriod:
    """Period of the orbit through p0 by direct integration to its first return."""
    _check_params(mu, S0, w)
    return closed_orbit_period(vector_field(mu, S0, w), [p0[0], p0[1]], xi_max, rtol, atol,
                               singular_guard(mu, S0, w))


def bloodflow_speed_for_perimeter(
    mu: float,
    S0: float,
    L_target: float,
    fraction: float,
    w_bracket: Tuple[float, float],
    tol: float = 1e-10
) -> float:
    """
    Wave speed whose orbit through (0, fraction * band_edge(w)) has period L_target.

    Args:
        mu: Wall parameter
        S0: Unperturbed cross-section
        L_target: Required period (vessel perimeter)
        fraction: Amplitude as a fraction of the band edge, in [0, 1)
        w_bracket: Speeds bracketing the solution, both in the center regime
        tol: Bisection width in w

    Returns:
        w

    Raises:
        ValueError: L_target <= 0, bad fraction, bracket outside the center regime or no sign change
    """
    if L_target <= 0:
        raise ValueError(f"L_target must be positive, got {L_target}")
    if not 0.0 <= fraction < 1.0:
        raise ValueError(f"fraction must lie in [0, 1), got {fraction}")
    w_lo, w_hi = sorted(float(v) for v in w_bracket)
    for w in (w_lo, w_hi):
        if bloodflow_classify(mu, S0, w).kind != CENTER:
            raise ValueError(f"Bracket end w={w} is not in the center regime (w^2 > mu S0)")
    if w_lo * w_hi <= 0:
        raise ValueError("Bracket must not contain w = 0")

    def mismatch(w: float) -> float:
        start = PhasePoint(0.0, fraction * bloodflow_band_edge(mu, S0, w))
        return bloodflow_period(mu, S0, w, start, tol) - L_target

    f_lo, f_hi = mismatch(w_lo), mismatch(w_hi)
    if f_lo * f_hi > 0:
        raise ValueError(f"L(w) - L_target has no sign change on [{w_lo}, {w_hi}] "
                         f"({f_lo:.6g}, {f_hi:.6g})")
    w = float(optimize.bisect(mismatch, w_lo, w_hi, xtol=tol))
    logger.debug(f"Speed for perimeter {L_target}: w={w:.12g}")
    return w
