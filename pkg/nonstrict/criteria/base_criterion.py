"""Base criterion abstract class."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from nonstrict.core.blowup import Verdict
from nonstrict.core.system import InitialProfile
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class CriterionResult:
    """Per-point values of a closed-form smoothness criterion and the overall verdict."""

    name: str
    x: np.ndarray
    values: np.ndarray
    verdict: Verdict
    max_value: float
    violating_x: Optional[float] = None

    @property
    def smooth_points(self) -> np.ndarray:
        """Boolean mask, True where the criterion certifies smoothness."""
        return self.values < 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'verdict': self.verdict.value,
            'max_value': self.max_value,
            'violating_x': self.violating_x,
            'per_point': [{'x0': float(x), 'value': float(v)} for x, v in zip(self.x, self.values)],
        }


class BaseCriterion(ABC):
    """Abstract base class for closed-form blow-up criteria."""

    name = 'criterion'
    components = 2

    def __init__(self, criterion_config: Optional[Dict[str, Any]] = None):
        """
        Initialize base criterion.

        Args:
            criterion_config: Criterion parameters (e.g. {'B0': 1.0})
        """
        self.config = criterion_config or {}

    @abstractmethod
    def values(self, prof: InitialProfile, x_grid: np.ndarray) -> np.ndarray:
        """
        Evaluate the criterion expression at each grid point.

        Negative values certify global smoothness of the characteristic
        starting there.

        Args:
            prof: Initial profile
            x_grid: Points to test

        Returns:
            Array of criterion values
        """
        pass

    def check(self, prof: InitialProfile, x_grid) -> CriterionResult:
        """
        Evaluate the criterion and decide global smoothness on the grid.

        Args:
            prof: Initial profile
            x_grid: Points to test

        Returns:
            CriterionResult; smooth iff every value is strictly negative

        Raises:
            ValueError: If the profile has the wrong number of components
        """
        if prof.n != self.components:
            raise ValueError(f"{self.name} needs n={self.components}, profile has n={prof.n}")
        xs = np.atleast_1d(np.asarray(x_grid, dtype=float))
        if xs.size == 0:
            raise ValueError("x_grid must not be empty")

        vals = np.asarray(self.values(prof, xs), dtype=float)
        worst = int(np.argmax(vals))
        max_value = float(vals[worst])

        if max_value < 0.0:
            logger.debug(f"{self.name}: smooth, max value {max_value:.6g}")
            return CriterionResult(self.name, xs, vals, Verdict.GLOBALLY_SMOOTH, max_value)

        logger.debug(f"{self.name}: violated at x={xs[worst]:.6g} (value {max_value:.6g})")
        return CriterionResult(self.name, xs, vals, Verdict.BLOWS_UP, max_value, float(xs[worst]))
