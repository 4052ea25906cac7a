"""Simple waves, traveling waves and phase-plane analysis."""

from nonstrict.waves.bloodflow import (
    bloodflow_band_edge,
    bloodflow_classify,
    bloodflow_orbit,
    bloodflow_orbit_period,
    bloodflow_period,
    bloodflow_psi,
    bloodflow_rhs,
    bloodflow_speed_for_perimeter,
    bloodflow_turning_points,
)
from nonstrict.waves.phase_plane import EquilibriumClass, PhasePoint, closed_orbit_period
from nonstrict.waves.simple_waves import TravelingWaveProblem, simple_wave_curve, tw_inviscid
from nonstrict.waves.viscous import (
    linear_tw_solution,
    linearized_tw_roots,
    tw_stratified,
    tw_viscous_coldplasma,
)

__all__ = [
    'bloodflow_band_edge',
    'bloodflow_classify',
    'bloodflow_orbit',
    'bloodflow_orbit_period',
    'bloodflow_period',
    'bloodflow_psi',
    'bloodflow_rhs',
    'bloodflow_speed_for_perimeter',
    'bloodflow_turning_points',
    'EquilibriumClass',
    'PhasePoint',
    'closed_orbit_period',
    'TravelingWaveProblem',
    'simple_wave_curve',
    'tw_inviscid',
    'linear_tw_solution',
    'linearized_tw_roots',
    'tw_stratified',
    'tw_viscous_coldplasma',
]
