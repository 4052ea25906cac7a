#!/usr/bin/env python3
"""Tests for characteristics, the q-scan and grid solutions."""

import math
import os
import sys

import numpy as np
import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from nonstrict.core import (
    InitialProfile,
    SystemSpec,
    Verdict,
    augmented_matrix,
    blowup_report,
    characteristic_solve,
    classify_derivative_orbit,
    conserved_radius,
    derivative_invariant,
    grid_solution,
    q_first_root,
)
from nonstrict.core.characteristics import propagate
from nonstrict.errors import BlowupError
from nonstrict.models import build

COLD_PLASMA = build('cold_plasma').spec
TWO_PI = 2 * math.pi


def smooth_profile(periodic=True):
    return InitialProfile.from_expressions(["0.5*sin(x)", "0.3*cos(x)"], (0.0, TWO_PI), periodic)


def random_subcritical_profile(rng):
    a, b = (float(v) for v in rng.uniform(-0.3, 0.3, 2))
    return InitialProfile.from_expressions([f"{a!r}*sin(x)", f"{b!r}*cos(x)"], (0.0, TWO_PI), periodic=True)


def test_system_spec_validation():
    with pytest.raises(ValueError):
        SystemSpec(2, np.eye(3))
    with pytest.raises(ValueError):
        SystemSpec(2, np.eye(2), np.ones((2, 3)))
    with pytest.raises(ValueError):
        SystemSpec(0, np.zeros((0, 0)))
    spec = SystemSpec(2, [[0, -1], [1, 0]])
    assert spec.same_as(SystemSpec(2, [[0, -1], [1, 0]], np.zeros((2, 2))))
    assert not spec.has_diffusion
    with pytest.raises(ValueError):
        spec.Q[0, 0] = 5.0


def test_augmented_matrix_layout():
    M = augmented_matrix(COLD_PLASMA)
    expected = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    assert np.array_equal(M, expected)


def test_profile_rejects_inconsistent_derivative():
    with pytest.raises(ValueError):
        InitialProfile.from_functions([np.sin], [np.sin], (0.0, 1.0))


def test_profile_from_samples_periodic_spline():
    x = np.linspace(0.0, TWO_PI, 257)
    prof = InitialProfile.from_samples(x, np.vstack([np.sin(x), np.cos(x)]), periodic=True)
    points = np.array([0.3, 2.0, 5.5])
    assert np.allclose(prof.value(points), [np.sin(points), np.cos(points)], atol=1e-7)
    assert np.allclose(prof.derivative(points), [np.cos(points), -np.sin(points)], atol=1e-5)
    with pytest.raises(ValueError):
        InitialProfile.from_samples(x, np.vstack([x, x]), periodic=True)


def test_closed_form_q_matches_exponential():
    # q(t) = (1 - u) + v sin t + u cos t for cold plasma
    rng = np.random.default_rng(2)
    v, u = rng.uniform(-2.0, 2.0, size=(2, 100))
    derivs = np.vstack([v, u])
    values = np.zeros_like(derivs)
    for t in np.linspace(0.0, 10.0, 101):
        _, _, q, _ = propagate(COLD_PLASMA, values, derivs, t)
        oracle = (1.0 - u) + v * math.sin(t) + u * math.cos(t)
        assert np.max(np.abs(q - oracle)) < 1e-8


def test_exact_blowup_time_linear_data():
    prof = InitialProfile.from_expressions(["0", "x"], (-1.0, 1.0))
    report = blowup_report(COLD_PLASMA, prof, Tmax=10.0)
    assert report.verdict == Verdict.BLOWS_UP
    assert report.t_star == pytest.approx(math.pi / 2, abs=1e-6)
    assert q_first_root(COLD_PLASMA, prof, 0.25) == pytest.approx(math.pi / 2, abs=1e-6)


def test_subcritical_profile_is_globally_smooth():
    report = blowup_report(COLD_PLASMA, smooth_profile(), Tmax=100.0)
    assert report.verdict == Verdict.GLOBALLY_SMOOTH
    assert report.t_star is None
    assert all(root is None for _, root in report.per_point)


def test_touch_points_reported_for_critical_data():
    # V' = 0 and U' = 1/2 gives D = 0: q = 1/2 + cos(t)/2 touches zero at t = pi
    prof = InitialProfile.from_expressions(["0", "0.5*x"], (0.0, 1.0))
    report = blowup_report(COLD_PLASMA, prof, x0_grid=[0.5], Tmax=10.0)
    assert report.blows_up
    assert report.t_star == pytest.approx(math.pi, abs=1e-5)
    assert report.touch_points == [0.5]


def test_blowup_report_rejects_points_outside_domain():
    with pytest.raises(ValueError):
        blowup_report(COLD_PLASMA, smooth_profile(False), x0_grid=[7.0])


def test_radius_conserved_along_characteristics():
    prof = smooth_profile()
    rng = np.random.default_rng(4)
    for x0 in rng.uniform(0.0, TWO_PI, 50):
        start = conserved_radius(characteristic_solve(COLD_PLASMA, prof, x0, 0.0))
        for t in np.linspace(0.0, 20.0, 21):
            state = characteristic_solve(COLD_PLASMA, prof, x0, t)
            assert abs(conserved_radius(state) - start) < 1e-8


def test_derivative_invariant_constant_before_blowup():
    prof = smooth_profile()
    for x0 in (0.4, 1.9, 3.3, 5.0):
        first = characteristic_solve(COLD_PLASMA, prof, x0, 0.0)
        C0 = derivative_invariant(*first.derivative)
        for t in (0.5, 2.0, 7.5):
            v, u = characteristic_solve(COLD_PLASMA, prof, x0, t).derivative
            assert derivative_invariant(v, u) == pytest.approx(C0, rel=1e-8, abs=1e-10)


DERIVATIVE_ORBIT_CASES = [
    {"D": -0.4, "expected": "ellipse", "reason": "sub-critical data"},
    {"D": 0.0, "expected": "parabola", "reason": "critical data"},
    {"D": 1.5, "expected": "hyperbola", "reason": "super-critical data"},
]


def test_derivative_orbit_classification():
    for case in DERIVATIVE_ORBIT_CASES:
        assert classify_derivative_orbit(case["D"]) == case["expected"], case["reason"]


def test_jacobian_matches_finite_difference_of_positions():
    # q = dx(t)/dx0, checked by central differences of the characteristic map
    rng = np.random.default_rng(8)
    h = 1e-5
    for _ in range(20):
        prof = random_subcritical_profile(rng)
        x0 = float(rng.uniform(0.5, 5.5))
        t = float(rng.uniform(0.0, 10.0))
        right = characteristic_solve(COLD_PLASMA, prof, x0 + h, t).x
        left = characteristic_solve(COLD_PLASMA, prof, x0 - h, t).x
        q = characteristic_solve(COLD_PLASMA, prof, x0, t).q
        assert (right - left) / (2 * h) == pytest.approx(q, rel=1e-4, abs=1e-7)


def test_characteristic_values_are_linear_in_data():
    first = ("0.3*sin(x)", "0.2*cos(x)")
    second = ("cos(x)", "x/7")
    alpha, beta = 1.5, -0.25
    combined = [f"{alpha!r}*({f}) + {beta!r}*({g})" for f, g in zip(first, second)]
    profs = [InitialProfile.from_expressions(list(c), (0.0, TWO_PI)) for c in (first, second, combined)]
    for x0 in (0.3, 2.2, 4.7):
        for t in (0.0, 1.1, 6.0):
            a, b, ab = (characteristic_solve(COLD_PLASMA, p, x0, t).V for p in profs)
            assert np.allclose(ab, alpha * a + beta * b, rtol=0.0, atol=1e-10)


def test_characteristic_position_for_constant_state():
    prof = InitialProfile.from_expressions(["1", "0"], (0.0, 10.0))
    free = SystemSpec(2, np.zeros((2, 2)))
    state = characteristic_solve(free, prof, 2.0, 3.0)
    assert state.x == pytest.approx(5.0)
    assert state.q == pytest.approx(1.0)
    with pytest.raises(ValueError):
        characteristic_solve(free, prof, 11.0, 1.0)


def test_grid_solution_periodic_in_time():
    prof = smooth_profile()
    xs = prof.default_grid(128)
    start = grid_solution(COLD_PLASMA, prof, 0.0, xs)
    after = grid_solution(COLD_PLASMA, prof, TWO_PI, xs)
    assert np.max(np.abs(after.values - start.values)) < 1e-5


def test_grid_solution_matches_characteristics():
    prof = smooth_profile()
    t = 1.3
    state = characteristic_solve(COLD_PLASMA, prof, 2.0, t)
    sol = grid_solution(COLD_PLASMA, prof, t, [state.x])
    assert np.allclose(sol.values[:, 0], state.V, atol=1e-7)
    assert sol.jacobian[0] == pytest.approx(state.q, abs=1e-6)


def test_grid_solution_is_exact_close_to_blowup():
    prof = InitialProfile.from_expressions(["1.2*sin(x)", "0"], (0.0, TWO_PI), periodic=True)
    t_star = blowup_report(COLD_PLASMA, prof, prof.default_grid(256), Tmax=10.0).t_star
    t = 0.9 * t_star
    states = [characteristic_solve(COLD_PLASMA, prof, x0, t) for x0 in np.linspace(0.1, 6.1, 25)]
    sol = grid_solution(COLD_PLASMA, prof, t, [state.x for state in states])
    assert np.allclose(sol.values, np.array([state.V for state in states]).T, atol=1e-10)
    assert np.allclose(sol.jacobian, [state.q for state in states], rtol=1e-8)


def test_grid_solution_zero_data_stays_zero():
    prof = InitialProfile.from_expressions(["0", "0"], (0.0, TWO_PI), periodic=True)
    for name in ('cold_plasma', 'euler_poisson', 'rayleigh_benard', 'blood_flow'):
        sol = grid_solution(build(name).spec, prof, 3.0, prof.default_grid(32))
        assert np.all(sol.values == 0.0), name


def test_grid_solution_past_blowup_raises():
    prof = InitialProfile.from_expressions(["0", "x"], (-1.0, 1.0))
    with pytest.raises(BlowupError) as excinfo:
        grid_solution(COLD_PLASMA, prof, 2.0, np.linspace(-0.5, 0.5, 11))
    assert "gradient catastrophe" in str(excinfo.value)


def test_davidson_solution_period():
    entry = build('davidson', {'B0': 0.5})
    prof = InitialProfile.from_expressions(["0.2*sin(x)", "0.1*cos(x)", "0.1*sin(x)"], (0.0, TWO_PI), True)
    xs = prof.default_grid(64)
    after = grid_solution(entry.spec, prof, entry.period, xs)
    assert entry.period == pytest.approx(TWO_PI / math.sqrt(1.25))
    assert np.max(np.abs(after.values - prof.value(xs))) < 1e-5
