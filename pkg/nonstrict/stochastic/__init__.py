"""Stochastic regularization: noisy characteristics and kernel field estimates."""

from nonstrict.stochastic.ensemble import ParticleEnsemble, evolve_ensemble, uniform_sampler
from nonstrict.stochastic.estimation import (
    ConvergenceStudy,
    FieldEstimate,
    convergence_study,
    estimate_fields,
    silverman_bandwidth,
)

__all__ = [
    'ParticleEnsemble',
    'evolve_ensemble',
    'uniform_sampler',
    'ConvergenceStudy',
    'FieldEstimate',
    'convergence_study',
    'estimate_fields',
    'silverman_bandwidth',
]
