#!/usr/bin/env python3
"""Tests for the profile expression grammar and its symbolic derivatives."""

import math
import os
import sys

import numpy as np
import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from nonstrict.errors import ConfigError
from nonstrict.utils.expressions import depends_on_x, evaluate_constant, parse_expression

X = np.linspace(-2.0, 2.0, 9)

VALID_CASES = [
    {
        "text": "0.5*sin(x)",
        "value": lambda x: 0.5 * np.sin(x),
        "derivative": lambda x: 0.5 * np.cos(x),
        "reason": "scaled sine"
    },
    {
        "text": "x",
        "value": lambda x: x,
        "derivative": lambda x: np.ones_like(x),
        "reason": "identity"
    },
    {
        "text": "exp(-x*x)",
        "value": lambda x: np.exp(-x * x),
        "derivative": lambda x: -2.0 * x * np.exp(-x * x),
        "reason": "Gaussian through the chain rule"
    },
    {
        "text": "sin(x)/(2 + cos(x))",
        "value": lambda x: np.sin(x) / (2 + np.cos(x)),
        "derivative": lambda x: (np.cos(x) * (2 + np.cos(x)) + np.sin(x) ** 2) / (2 + np.cos(x)) ** 2,
        "reason": "quotient rule"
    },
    {
        "text": "-cos(2*pi*x) + e",
        "value": lambda x: -np.cos(2 * np.pi * x) + np.e,
        "derivative": lambda x: 2 * np.pi * np.sin(2 * np.pi * x),
        "reason": "named constants pi and e"
    },
    {
        "text": 3,
        "value": lambda x: np.full_like(x, 3.0),
        "derivative": lambda x: np.zeros_like(x),
        "reason": "bare numbers are constants"
    },
]

INVALID_CASES = [
    {"text": "x**2", "reason": "power is outside the grammar"},
    {"text": "tan(x)", "reason": "only sin, cos and exp may be called"},
    {"text": "y + 1", "reason": "unknown variable"},
    {"text": "sin(x", "reason": "syntax error"},
    {"text": "__import__('os')", "reason": "arbitrary calls are rejected"},
    {"text": "", "reason": "empty expression"},
    {"text": "sin(x, 2)", "reason": "wrong arity"},
    {"text": "x if x else 1", "reason": "conditional expressions are rejected"},
    {"text": "x^2", "reason": "caret is not an operator"},
    {"text": "1/0", "reason": "division by zero is not finite"},
    {"text": "lambda: 1", "reason": "keywords are unknown names"},
    {"text": "x.real", "reason": "attribute access is rejected"},
]


def test_valid_expressions():
    for case in VALID_CASES:
        tree = parse_expression(case["text"])
        assert np.allclose(tree(X), case["value"](X), atol=1e-14), case["reason"]
        assert np.allclose(tree.derivative()(X), case["derivative"](X), atol=1e-12), case["reason"]


def test_invalid_expressions():
    for case in INVALID_CASES:
        with pytest.raises(ConfigError):
            parse_expression(case["text"])


def test_config_error_is_value_error():
    with pytest.raises(ValueError):
        parse_expression("x ** 3")


def test_evaluate_constant():
    assert evaluate_constant("2*pi") == pytest.approx(2 * math.pi)
    assert evaluate_constant("-pi/2") == pytest.approx(-math.pi / 2)
    assert evaluate_constant(1.5) == 1.5
    with pytest.raises(ConfigError):
        evaluate_constant("x + 1")


def test_depends_on_x():
    assert depends_on_x(parse_expression("sin(x) + 0"))
    assert not depends_on_x(parse_expression("sin(x) * 0")), "identically zero after simplification"
    assert not depends_on_x(parse_expression("exp(1) - pi"))


def test_scalar_and_array_shapes():
    tree = parse_expression("1")
    assert tree(np.zeros(5)).shape == (5,)
    assert tree(0.3).shape == ()


def test_derivative_matches_central_differences():
    tree = parse_expression("exp(sin(x)) / (3 + cos(2*x))")
    h = 1e-6
    numeric = (tree(X + h) - tree(X - h)) / (2 * h)
    assert np.allclose(tree.derivative()(X), numeric, atol=1e-8)


def test_expression_keeps_source_text():
    assert str(parse_expression("  0.5*sin(x) ")) == "0.5*sin(x)"
    assert str(parse_expression(2.5)) == "2.5"
