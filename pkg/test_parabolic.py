#!/usr/bin/env python3
"""Tests for the upwind finite-difference solver."""

import math
import os
import sys

import numpy as np
import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from nonstrict.core import Verdict, blowup_report
from nonstrict.core.characteristics import grid_solution
from nonstrict.core.system import InitialProfile, SystemSpec
from nonstrict.errors import NumericalError
from nonstrict.models import build
from nonstrict.numkit import expm
from nonstrict.parabolic import cfl_limits, fd_solve, upwind_step

TWO_PI = 2 * math.pi
COLD_PLASMA = build('cold_plasma').spec
FREE = SystemSpec(2, np.zeros((2, 2)), None, 'free')
WEAK_DIFFUSION = SystemSpec(2, np.zeros((2, 2)), np.diag([0.01, 0.0]), 'weak_diffusion')


def smooth_profile():
    return InitialProfile.from_expressions(["0.5*sin(x)", "0.3*cos(x)"], (0.0, TWO_PI), periodic=True)


CFL_CASES = [
    {"sys": FREE, "fields": [[2.0, -1.0], [0.0, 0.0]], "dx": 0.01, "expected": 0.005,
     "reason": "advection limit dx / max|V_1|"},
    {"sys": WEAK_DIFFUSION, "fields": [[0.0, 0.0], [0.0, 0.0]], "dx": 0.01, "expected": 0.005,
     "reason": "diffusion limit dx^2 / (2 |B|)"},
    {"sys": COLD_PLASMA, "fields": [[0.0, 0.0], [0.0, 0.0]], "dx": 0.01, "expected": 0.5,
     "reason": "source limit 1 / (2 |Q|)"},
    {"sys": FREE, "fields": [[0.0, 0.0], [0.0, 0.0]], "dx": 0.01, "expected": math.inf,
     "reason": "nothing limits the step"},
]


def test_cfl_limits():
    for case in CFL_CASES:
        limit = cfl_limits(case["sys"], np.array(case["fields"]), case["dx"])
        assert limit == pytest.approx(case["expected"]), case["reason"]
    with pytest.raises(ValueError):
        cfl_limits(FREE, np.zeros((2, 2)), 0.0)


def test_upwind_step_keeps_constants():
    V = np.vstack([np.full(16, 0.7), np.full(16, -0.2)])
    new = upwind_step(FREE, V, 0.1, 0.05)
    assert np.array_equal(new, V)


def test_zero_data_stays_zero():
    prof = InitialProfile.from_expressions(["0", "0"], (0.0, TWO_PI), periodic=True)
    history = fd_solve(build('rayleigh_benard', {'nu': 0.1, 'kappa': 0.1}).spec, prof, 0.05, 0.01, 1.0)
    assert np.all(history.at(1.0).fields == 0.0)


def test_output_times_are_hit_exactly():
    prof = smooth_profile()
    history = fd_solve(COLD_PLASMA, prof, 0.05, 0.02, 0.5, output_times=[0.0, 0.25, 0.5, 0.13])
    assert [state.t for state in history] == [0.0, 0.13, 0.25, 0.5]
    initial = history.at(0.0)
    assert np.allclose(initial.fields, prof.value(initial.x_grid))
    with pytest.raises(KeyError):
        history.at(0.3)


def test_transport_of_passive_component():
    prof = InitialProfile.from_expressions(["1", "0.5*sin(x)"], (0.0, TWO_PI), periodic=True)
    history = fd_solve(FREE, prof, 0.01, 0.005, 1.0)
    state = history.at(1.0)
    assert np.allclose(state.fields[0], 1.0)
    assert np.max(np.abs(state.fields[1] - 0.5 * np.sin(state.x_grid - 1.0))) < 0.01


def test_first_order_convergence_to_characteristic_solution():
    prof = smooth_profile()
    errors = []
    for dx in (0.02, 0.01, 0.005):
        state = fd_solve(COLD_PLASMA, prof, dx, 0.5 * dx, 1.0).at(1.0)
        exact = grid_solution(COLD_PLASMA, prof, 1.0, state.x_grid).values
        errors.append(float(np.max(np.abs(state.fields - exact))))
    for coarse, fine in zip(errors, errors[1:]):
        assert 1.4 <= coarse / fine <= 2.6


def test_viscous_run_stays_finite():
    spec = build('rayleigh_benard', {'nu': 0.1, 'kappa': 0.1}).spec
    history = fd_solve(spec, smooth_profile(), 0.05, 0.01, 1.0)
    assert history.reductions == 0
    assert np.all(np.isfinite(history.at(1.0).fields))


def test_viscous_run_continues_past_inviscid_blowup():
    # observational: diffusion keeps supercritical data finite past the inviscid T*
    spec = build('rayleigh_benard', {'nu': 0.1, 'kappa': 0.1}).spec
    prof = InitialProfile.from_expressions(["1.2*sin(x)", "0"], (0.0, TWO_PI), periodic=True)
    report = blowup_report(spec.inviscid(), prof, prof.default_grid(256), Tmax=10.0)
    assert report.verdict == Verdict.BLOWS_UP
    t_end = 1.5 * report.t_star
    history = fd_solve(spec, prof, 0.05, 0.01, t_end)
    fields = history.at(t_end).fields
    assert np.all(np.isfinite(fields))
    assert np.max(np.abs(fields)) < 10.0


def test_small_data_step_follows_linear_source():
    rng = np.random.default_rng(3)
    V = 1e-7 * rng.uniform(-1.0, 1.0, (2, 64))
    for dt in (0.1, 0.05, 0.025):
        new = upwind_step(COLD_PLASMA, V, 0.1, dt)
        assert np.max(np.abs(new - expm(COLD_PLASMA.Q, dt) @ V)) <= dt ** 2 * np.max(np.abs(V))


def test_step_is_reduced_to_meet_cfl():
    spec = build('rayleigh_benard', {'nu': 0.1, 'kappa': 0.1}).spec
    history = fd_solve(spec, smooth_profile(), 0.05, 0.1, 0.5)
    assert history.reductions > 0
    assert np.all(np.isfinite(history.at(0.5).fields))
    with pytest.raises(NumericalError):
        fd_solve(spec, smooth_profile(), 0.05, 0.1, 0.5, max_reductions=1)


def test_invalid_runs():
    with pytest.raises(ValueError):
        fd_solve(COLD_PLASMA, InitialProfile.from_expressions(["0", "x"], (-1.0, 1.0)), 0.01, 0.005, 1.0)
    with pytest.raises(ValueError):
        fd_solve(COLD_PLASMA, smooth_profile(), 0.0, 0.005, 1.0)
    with pytest.raises(ValueError):
        fd_solve(COLD_PLASMA, smooth_profile(), 0.01, 0.005, 1.0, output_times=[2.0])
