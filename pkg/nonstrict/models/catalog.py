"""Catalog of physical models as SystemSpec instances."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from nonstrict.core.system import SystemSpec
from nonstrict.errors import ConfigError
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

INF = math.inf

# name -> parameter -> (default, lower bound, description)
MODEL_SCHEMAS: Dict[str, Dict[str, tuple]] = {
    'cold_plasma': {
        'nu': (0.0, 0.0, 'viscosity acting on the velocity'),
    },
    'euler_poisson': {
        'k': (1.0, -INF, 'force constant; k > 0 repulsive, k < 0 attractive'),
        'n0': (1.0, 0.0, 'background density'),
        'q': (0.0, 0.0, 'friction coefficient'),
        'nu': (0.0, 0.0, 'viscosity acting on the velocity'),
    },
    'rayleigh_benard': {
        'nu': (0.0, 0.0, 'kinematic viscosity'),
        'kappa': (0.0, 0.0, 'thermal diffusivity'),
    },
    'stratified_fluid': {
        'nu': (0.0, 0.0, 'kinematic viscosity'),
        'kappa': (0.0, 0.0, 'salinity diffusivity'),
    },
    'blood_flow': {
        'mu': (1.0, 0.0, 'wall rigidity over blood density (D / rho)'),
        'S0': (1.0, 0.0, 'unperturbed vessel cross-section'),
        'D': (None, 0.0, 'wall rigidity; with rho it sets mu = D / rho'),
        'rho': (None, 0.0, 'blood density'),
        'P0': (0.0, -INF, 'reference pressure'),
    },
    'davidson': {
        'B0': (0.0, -INF, 'constant magnetic field'),
        'q': (0.0, 0.0, 'collision frequency'),
    },
}

ROTATION = [[0.0, -1.0], [1.0, 0.0]]


@dataclass(frozen=True, eq=False)
class ModelEntry:
    """A named model with its parameters, system and applicable criteria."""

    name: str
    params: Dict[str, Any]
    spec: SystemSpec
    criteria: List[str] = field(default_factory=list)
    notes: str = ''
    period: Optional[float] = None

    def criterion_config(self) -> Dict[str, Any]:
        """Parameters the attached criteria need."""
        return {'B0': self.params['B0']} if self.name == 'davidson' else {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'params': dict(self.params),
            'spec': self.spec.to_dict(),
            'criteria': list(self.criteria),
            'notes': self.notes,
            'period': self.period,
        }


def resolve_params(name: str, params: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Fill defaults and validate parameters against the model schema.

    Raises:
        ConfigError: Unknown model, unknown parameter or value out of range
    """
    if name not in MODEL_SCHEMAS:
        raise ConfigError(f"Unknown model '{name}'. Available: {', '.join(MODEL_SCHEMAS)}")
    schema = MODEL_SCHEMAS[name]
    params = dict(params or {})

    unknown = sorted(set(params) - set(schema))
    if unknown:
        raise ConfigError(f"Unknown parameter(s) for model '{name}': {', '.join(unknown)}")

    resolved = {}
    for key, (default, lower, _) in schema.items():
        value = params.get(key, default)
        if value is None:
            resolved[key] = None
            continue
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"Parameter '{key}' of model '{name}' must be a number, got {value!r}")
        if not math.isfinite(value) or value < lower:
            raise ConfigError(f"Parameter '{key}' of model '{name}' out of range: {value}")
        resolved[key] = value

    if name == 'blood_flow':
        if (resolved['D'] is None) != (resolved['rho'] is None):
            raise ConfigError("blood_flow needs both 'D' and 'rho' or neither")
        if resolved['D'] is not None:
            if resolved['rho'] <= 0:
                raise ConfigError(f"blood_flow 'rho' must be positive, got {resolved['rho']}")
            if 'mu' in params:
                raise ConfigError("blood_flow takes either 'mu' or 'D'/'rho', not both")
            resolved['mu'] = resolved['D'] / resolved['rho']

    return resolved


def _diag(a: float, b: float) -> np.ndarray:
    return np.diag([a, b])


def build(name: str, params: Optional[Dict[str, Any]] = None) -> ModelEntry:
    """
    Build a catalog entry.

    Args:
        name: One of MODEL_SCHEMAS
        params: Model parameters (missing ones take their defaults)

    Returns:
        ModelEntry

    Raises:
        ConfigError: Unknown name or out-of-range parameter
    """
    p = resolve_params(name, params)

    if name == 'cold_plasma':
        spec = SystemSpec(2, ROTATION, _diag(p['nu'], 0.0), 'cold_plasma')
        return ModelEntry(name, p, spec, ['cold_plasma'],
                          'Electron fluid with immobile ions, components (V, E).', 2 * math.pi)

    if name == 'euler_poisson':
        k, n0, q = p['k'], p['n0'], p['q']
        spec = SystemSpec(2, [[-q, -k], [n0, 0.0]], _diag(p['nu'], 0.0), 'euler_poisson')
        criteria = ['cold_plasma'] if (k, n0, q) == (1.0, 1.0, 0.0) else []
        period = 2 * math.pi / math.sqrt(k * n0) if q == 0.0 and k * n0 > 0 else None
        if k < 0 or n0 == 0:
            notes = 'Regime without a closed-form criterion; only the generic q-scan applies.'
        else:
            notes = 'Pressureless Euler-Poisson, components (V, E).'
        return ModelEntry(name, p, spec, criteria, notes, period)

    if name in ('rayleigh_benard', 'stratified_fluid'):
        spec = SystemSpec(2, ROTATION, _diag(p['nu'], p['kappa']), name)
        notes = ('Convection, components (V, temperature).' if name == 'rayleigh_benard'
                 else 'Stratified fluid, components (V, salinity).')
        return ModelEntry(name, p, spec, ['cold_plasma'], notes, 2 * math.pi)

    if name == 'blood_flow':
        S0 = p['S0']
        spec = SystemSpec(2, [[0.0, -1.0], [S0, 0.0]], [[0.0, p['mu']], [0.0, 0.0]], 'blood_flow')
        criteria = ['cold_plasma'] if S0 == 1.0 else []
        period = 2 * math.pi / math.sqrt(S0) if S0 > 0 else None
        return ModelEntry(name, p, spec, criteria,
                          'Vessel flow, components (V, E); wall elasticity enters B[0][1] = mu.', period)

    B0, q = p['B0'], p['q']
    spec = SystemSpec(3, [[-q, -B0, -1.0], [B0, -q, 0.0], [1.0, 0.0, 0.0]], None, 'davidson')
    criteria = ['davidson'] if q == 0.0 else []
    period = 2 * math.pi / math.sqrt(1.0 + B0 ** 2) if q == 0.0 else None
    return ModelEntry(name, p, spec, criteria,
                      'Magnetized cold plasma, components (V1, V2, E).', period)


def list_models() -> List[Dict[str, Any]]:
    """Catalog listing with parameter schemas and dimensions."""
    listing = []
    for name, schema in MODEL_SCHEMAS.items():
        entry = build(name)
        listing.append({
            'name': name,
            'n': entry.spec.n,
            'criteria': entry.criteria,
            'notes': entry.notes,
            'params': {
                key: {'default': default, 'min': None if lower == -INF else lower, 'description': text}
                for key, (default, lower, text) in schema.items()
            },
        })
    return listing


def pressure_from_E(entry: ModelEntry, E_x: float) -> float:
    """
    Blood pressure P = P0 - D * E_x.

    Raises:
        ValueError: If the entry is not blood_flow or D is missing
    """
    if entry.name != 'blood_flow':
        raise ValueError(f"pressure_from_E needs a blood_flow model, got '{entry.name}'")
    D = entry.params.get('D')
    if D is None:
        raise ValueError("pressure_from_E needs the wall rigidity 'D'")
    return entry.params['P0'] - D * E_x


def stratified_dimensionless(
    g: float,
    Lambda: float,
    nu_bar: float,
    kappa_bar: float,
    V_bar: float
) -> Dict[str, float]:
    """
    Dimensionless stratified-fluid coefficients.

    Args:
        g: Gravity
        Lambda: Stratification length scale
        nu_bar: Dimensional viscosity
        kappa_bar: Dimensional diffusivity
        V_bar: Velocity scale

    Returns:
        {'N': buoyancy frequency sqrt(g/Lambda), 'nu': ..., 'kappa': ...}
    """
    if g <= 0 or Lambda <= 0 or V_bar == 0:
        raise ValueError("g and Lambda must be positive and V_bar non-zero")
    if nu_bar < 0 or kappa_bar < 0:
        raise ValueError("Dimensional diffusivities must be non-negative")
    N = math.sqrt(g / Lambda)
    return {'N': N, 'nu': nu_bar * N / V_bar ** 2, 'kappa': kappa_bar * N / V_bar ** 2}
