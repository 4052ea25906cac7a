"""Smoothness criterion for the two-component cold-plasma system."""

import numpy as np

from nonstrict.core.system import InitialProfile
from nonstrict.criteria.base_criterion import BaseCriterion, CriterionResult


class ColdPlasmaCriterion(BaseCriterion):
    """
    D(x) = V_0'(x)^2 + 2 U_0'(x) - 1.

    The solution stays smooth for all time iff D < 0 at every point.
    """

    name = 'cold_plasma'
    components = 2

    def values(self, prof: InitialProfile, x_grid: np.ndarray) -> np.ndarray:
        dv, du = prof.derivative(x_grid)
        return dv ** 2 + 2.0 * du - 1.0


def criterion_cold_plasma(prof: InitialProfile, x_grid) -> CriterionResult:
    """Per-point D values and the global verdict."""
    return ColdPlasmaCriterion().check(prof, x_grid)
