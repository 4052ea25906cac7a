#!/usr/bin/env python3
"""Tests for the model catalog."""

import math
import os
import sys

import numpy as np
import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from nonstrict.errors import ConfigError
from nonstrict.models import MODEL_SCHEMAS, build, list_models, pressure_from_E, stratified_dimensionless

BUILD_CASES = [
    {
        "name": "cold_plasma",
        "params": {},
        "Q": [[0, -1], [1, 0]],
        "B": [[0, 0], [0, 0]],
        "reason": "rotation generator without viscosity"
    },
    {
        "name": "euler_poisson",
        "params": {"k": 2.0, "n0": 3.0, "q": 0.5, "nu": 0.1},
        "Q": [[-0.5, -2.0], [3.0, 0.0]],
        "B": [[0.1, 0], [0, 0]],
        "reason": "friction on the diagonal, viscosity on V only"
    },
    {
        "name": "rayleigh_benard",
        "params": {"nu": 0.1, "kappa": 0.2},
        "Q": [[0, -1], [1, 0]],
        "B": [[0.1, 0], [0, 0.2]],
        "reason": "diagonal diffusion of velocity and temperature"
    },
    {
        "name": "blood_flow",
        "params": {"mu": 1.5, "S0": 2.0},
        "Q": [[0, -1], [2.0, 0]],
        "B": [[0, 1.5], [0, 0]],
        "reason": "wall term acts on E inside the V equation"
    },
    {
        "name": "davidson",
        "params": {"B0": 0.5, "q": 0.1},
        "Q": [[-0.1, -0.5, -1.0], [0.5, -0.1, 0.0], [1.0, 0.0, 0.0]],
        "B": None,
        "reason": "three components with magnetic rotation"
    },
]

BAD_PARAMS_CASES = [
    {"name": "plasma", "params": {}, "reason": "unknown model"},
    {"name": "cold_plasma", "params": {"kappa": 1.0}, "reason": "unknown parameter"},
    {"name": "euler_poisson", "params": {"n0": -1.0}, "reason": "negative density"},
    {"name": "rayleigh_benard", "params": {"nu": "fast"}, "reason": "not a number"},
    {"name": "blood_flow", "params": {"D": 1.0}, "reason": "D without rho"},
    {"name": "blood_flow", "params": {"D": 1.0, "rho": 1.0, "mu": 2.0}, "reason": "mu together with D"},
    {"name": "davidson", "params": {"q": float('nan')}, "reason": "non-finite value"},
]


def test_build_cases():
    for case in BUILD_CASES:
        entry = build(case["name"], case["params"])
        assert np.allclose(entry.spec.Q, case["Q"]), case["reason"]
        if case["B"] is None:
            assert entry.spec.B is None, case["reason"]
        else:
            assert np.allclose(entry.spec.B, case["B"]), case["reason"]


def test_bad_parameters():
    for case in BAD_PARAMS_CASES:
        with pytest.raises(ConfigError):
            build(case["name"], case["params"])


def test_reduction_chains():
    cold = build('cold_plasma').spec
    assert build('euler_poisson', {'k': 1, 'n0': 1, 'q': 0}).spec.same_as(cold)
    assert build('rayleigh_benard', {'nu': 0, 'kappa': 0}).spec.same_as(cold)
    assert build('stratified_fluid').spec.same_as(cold)
    assert np.array_equal(build('blood_flow', {'mu': 0.0, 'S0': 1.0}).spec.Q, cold.Q)


def test_periods():
    assert build('cold_plasma').period == pytest.approx(2 * math.pi)
    assert build('euler_poisson', {'k': 4.0, 'n0': 1.0}).period == pytest.approx(math.pi)
    assert build('davidson', {'B0': 2.0}).period == pytest.approx(2 * math.pi / math.sqrt(5.0))
    assert build('davidson', {'q': 0.1}).period is None
    assert build('euler_poisson', {'k': -1.0}).period is None


def test_attached_criteria():
    assert build('cold_plasma').criteria == ['cold_plasma']
    assert build('euler_poisson', {'q': 0.2}).criteria == []
    assert build('davidson', {'B0': 1.0}).criteria == ['davidson']
    assert build('davidson', {'B0': 1.0}).criterion_config() == {'B0': 1.0}


def test_list_models():
    listing = list_models()
    names = [m['name'] for m in listing]
    assert names == list(MODEL_SCHEMAS)
    assert len(names) == 6
    davidson = next(m for m in listing if m['name'] == 'davidson')
    assert davidson['n'] == 3
    assert 'B0' in davidson['params']


PRESSURE_CASES = [
    {"params": {"D": 2.0, "rho": 1.0, "P0": 100.0}, "E_x": 3.0, "expected": 94.0, "reason": "P0 - D E_x"},
    {"params": {"D": 2.0, "rho": 1.0, "P0": 100.0}, "E_x": 0.0, "expected": 100.0, "reason": "flat E"},
    {"params": {"D": 0.0, "rho": 1.0, "P0": 7.0}, "E_x": 5.0, "expected": 7.0, "reason": "zero rigidity"},
]


def test_pressure_from_E():
    for case in PRESSURE_CASES:
        entry = build('blood_flow', case["params"])
        assert pressure_from_E(entry, case["E_x"]) == pytest.approx(case["expected"]), case["reason"]
    with pytest.raises(ValueError):
        pressure_from_E(build('cold_plasma'), 1.0)
    with pytest.raises(ValueError):
        pressure_from_E(build('blood_flow'), 1.0)


def test_blood_flow_mu_from_rigidity():
    entry = build('blood_flow', {'D': 3.0, 'rho': 1.5})
    assert entry.params['mu'] == pytest.approx(2.0)
    assert entry.spec.B[0, 1] == pytest.approx(2.0)


def test_stratified_dimensionless():
    coeffs = stratified_dimensionless(g=9.0, Lambda=4.0, nu_bar=0.2, kappa_bar=0.1, V_bar=0.5)
    assert coeffs['N'] == pytest.approx(1.5)
    assert coeffs['nu'] == pytest.approx(0.2 * 1.5 / 0.25)
    assert coeffs['kappa'] == pytest.approx(0.1 * 1.5 / 0.25)
    with pytest.raises(ValueError):
        stratified_dimensionless(0.0, 1.0, 0.1, 0.1, 1.0)
