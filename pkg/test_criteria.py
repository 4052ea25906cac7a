#!/usr/bin/env python3
"""Tests for the closed-form smoothness criteria against the generic q-scan."""

import math
import os
import sys

import numpy as np
import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from nonstrict.core import InitialProfile, Verdict, blowup_report
from nonstrict.criteria import (
    ColdPlasmaCriterion,
    DavidsonCriterion,
    criterion_cold_plasma,
    criterion_davidson,
    get_criterion,
)
from nonstrict.models import build

TWO_PI = 2 * math.pi

COLD_PLASMA_CASES = [
    {
        "components": ["0.5*sin(x)", "0.3*cos(x)"],
        "verdict": Verdict.GLOBALLY_SMOOTH,
        "max_value": -0.4,
        "reason": "D = 0.25 cos^2 x - 0.6 sin x - 1 peaks at -0.4 where sin x = -1"
    },
    {
        "components": ["0", "x"],
        "verdict": Verdict.BLOWS_UP,
        "max_value": 1.0,
        "reason": "U' = 1 gives D = 1 everywhere"
    },
    {
        "components": ["1.2*sin(x)", "0"],
        "verdict": Verdict.BLOWS_UP,
        "max_value": 0.44,
        "reason": "|V'| = 1.2 > 1 at x = 0"
    },
    {
        "components": ["0", "0"],
        "verdict": Verdict.GLOBALLY_SMOOTH,
        "max_value": -1.0,
        "reason": "rest state"
    },
]


def random_profile(rng, n=2):
    parts = []
    for k in range(n):
        amp = float(rng.uniform(-2.0, 2.0))
        freq = float(rng.integers(1, 4))
        phase = float(rng.uniform(0.0, TWO_PI))
        fn = 'sin' if k % 2 == 0 else 'cos'
        parts.append(f"{amp!r}*{fn}({freq!r}*x + {phase!r})")
    return InitialProfile.from_expressions(parts, (0.0, TWO_PI), periodic=True)


def test_cold_plasma_cases():
    xs = np.linspace(0.0, TWO_PI, 2001)
    for case in COLD_PLASMA_CASES:
        prof = InitialProfile.from_expressions(case["components"], (0.0, TWO_PI))
        result = criterion_cold_plasma(prof, xs)
        assert result.verdict == case["verdict"], case["reason"]
        assert result.max_value == pytest.approx(case["max_value"], abs=1e-3), case["reason"]


def test_cold_plasma_criterion_matches_scan():
    # per-point verdicts must agree with the existence of a first root of q
    rng = np.random.default_rng(11)
    spec = build('cold_plasma').spec
    for _ in range(50):
        prof = random_profile(rng)
        xs = prof.default_grid(64)
        result = criterion_cold_plasma(prof, xs)
        report = blowup_report(spec, prof, xs, Tmax=100.0)
        scan_smooth = np.array([root is None for _, root in report.per_point])
        assert np.array_equal(scan_smooth, result.smooth_points), prof.label
        assert (report.verdict == Verdict.GLOBALLY_SMOOTH) == (result.verdict == Verdict.GLOBALLY_SMOOTH)


def test_cold_plasma_criterion_matches_scan_full_grid():
    # 200 random profiles, every one of 128 points must agree
    rng = np.random.default_rng(2024)
    spec = build('cold_plasma').spec
    agree = 0
    for _ in range(200):
        prof = random_profile(rng)
        xs = prof.default_grid(128)
        result = criterion_cold_plasma(prof, xs)
        report = blowup_report(spec, prof, xs, Tmax=100.0)
        scan_smooth = np.array([root is None for _, root in report.per_point])
        assert np.array_equal(scan_smooth, result.smooth_points), prof.label
        agree += int(np.sum(scan_smooth == result.smooth_points))
    assert agree == 200 * 128


def test_davidson_criterion_matches_scan():
    rng = np.random.default_rng(23)
    for B0 in (0.0, 0.5, 2.0):
        spec = build('davidson', {'B0': B0}).spec
        for _ in range(50):
            prof = random_profile(rng, n=3)
            xs = prof.default_grid(32)
            result = criterion_davidson(prof, B0, xs)
            report = blowup_report(spec, prof, xs, Tmax=100.0)
            scan_smooth = np.array([root is None for _, root in report.per_point])
            assert np.array_equal(scan_smooth, result.smooth_points), f"B0={B0}: {prof.label}"


def test_davidson_without_field_reduces_to_cold_plasma():
    # with B0 = 0 and V_2 = 0 the (V_1, E) block is the cold-plasma system
    davidson = build('davidson', {'B0': 0.0}).spec
    cold = build('cold_plasma').spec
    assert np.array_equal(davidson.Q[np.ix_([0, 2], [0, 2])], cold.Q)
    assert np.all(davidson.Q[1] == 0.0)

    rng = np.random.default_rng(5)
    for _ in range(20):
        a, b, c = (float(v) for v in rng.uniform(-2.0, 2.0, 3))
        three = InitialProfile.from_expressions([f"{a!r}*sin(x)", f"{c!r}*cos(x)", f"{b!r}*cos(x)"], (0.0, TWO_PI))
        two = InitialProfile.from_expressions([f"{a!r}*sin(x)", f"{b!r}*cos(x)"], (0.0, TWO_PI))
        xs = np.linspace(0.0, TWO_PI, 33)
        assert np.array_equal(criterion_davidson(three, 0.0, xs).values, criterion_cold_plasma(two, xs).values)


def test_criterion_rejects_wrong_dimension():
    prof = InitialProfile.from_expressions(["sin(x)"], (0.0, 1.0))
    with pytest.raises(ValueError):
        ColdPlasmaCriterion().check(prof, [0.5])
    with pytest.raises(ValueError):
        DavidsonCriterion({'B0': 1.0}).check(prof, [0.5])


def test_get_criterion_factory():
    assert isinstance(get_criterion('cold_plasma'), ColdPlasmaCriterion)
    davidson = get_criterion('davidson', {'B0': 2.0})
    assert isinstance(davidson, DavidsonCriterion) and davidson.B0 == 2.0
    with pytest.raises(ValueError):
        get_criterion('unknown')


def test_result_serialization():
    prof = InitialProfile.from_expressions(["0", "x"], (0.0, 1.0))
    data = criterion_cold_plasma(prof, [0.0, 0.5]).to_dict()
    assert data['verdict'] == 'blows_up'
    assert data['violating_x'] == 0.0
    assert len(data['per_point']) == 2
