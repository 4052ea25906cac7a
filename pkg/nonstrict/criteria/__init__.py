"""Closed-form blow-up criteria."""

from nonstrict.criteria.base_criterion import BaseCriterion, CriterionResult
from nonstrict.criteria.cold_plasma_criterion import ColdPlasmaCriterion, criterion_cold_plasma
from nonstrict.criteria.davidson_criterion import DavidsonCriterion, criterion_davidson


def get_criterion(name: str, criterion_config=None) -> BaseCriterion:
    """
    Factory function to create a criterion by name.

    Args:
        name: 'cold_plasma' or 'davidson'
        criterion_config: Criterion parameters

    Returns:
        Criterion instance
    """
    if name == 'cold_plasma':
        return ColdPlasmaCriterion(criterion_config)
    elif name == 'davidson':
        return DavidsonCriterion(criterion_config)
    else:
        raise ValueError(f"Unknown criterion: {name}")


__all__ = [
    'BaseCriterion',
    'CriterionResult',
    'ColdPlasmaCriterion',
    'DavidsonCriterion',
    'criterion_cold_plasma',
    'criterion_davidson',
    'get_criterion',
]
