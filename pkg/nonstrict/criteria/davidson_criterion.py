"""Smoothness criterion for Davidson's magnetized cold plasma without friction."""

from typing import Any, Dict, Optional

import numpy as np

from nonstrict.core.system import InitialProfile
from nonstrict.criteria.base_criterion import BaseCriterion, CriterionResult


class DavidsonCriterion(BaseCriterion):
    """
    (V_1')^2 + 2 E' + 2 B_0 V_2' - B_0^2 - 1 for components (V_1, V_2, E).

    Negative everywhere iff the solution is globally smooth.
    """

    name = 'davidson'
    components = 3

    def __init__(self, criterion_config: Optional[Dict[str, Any]] = None):
        super().__init__(criterion_config)
        self.B0 = float(self.config.get('B0', 0.0))

    def values(self, prof: InitialProfile, x_grid: np.ndarray) -> np.ndarray:
        dv1, dv2, de = prof.derivative(x_grid)
        B0 = self.B0
        return dv1 ** 2 + 2.0 * de + 2.0 * B0 * dv2 - B0 ** 2 - 1.0


def criterion_davidson(prof: InitialProfile, B0: float, x_grid) -> CriterionResult:
    """Per-point criterion values and the global verdict for a given field B0."""
    return DavidsonCriterion({'B0': B0}).check(prof, x_grid)
