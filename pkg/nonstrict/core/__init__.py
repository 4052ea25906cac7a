"""Systems, characteristics and blow-up detection."""

from nonstrict.core.blowup import BlowupReport, Verdict, blowup_report, q_first_root
from nonstrict.core.characteristics import (
    CharacteristicState,
    GridSolution,
    characteristic_solve,
    classify_derivative_orbit,
    conserved_radius,
    derivative_invariant,
    grid_solution,
)
from nonstrict.core.system import InitialProfile, SystemSpec, augmented_matrix

__all__ = [
    'BlowupReport',
    'Verdict',
    'blowup_report',
    'q_first_root',
    'CharacteristicState',
    'GridSolution',
    'characteristic_solve',
    'classify_derivative_orbit',
    'conserved_radius',
    'derivative_invariant',
    'grid_solution',
    'InitialProfile',
    'SystemSpec',
    'augmented_matrix',
]
