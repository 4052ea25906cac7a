"""Arithmetic grammar for initial profiles, parsed and differentiated with sympy.

Accepted tokens: numbers, the variable ``x``, the constants ``pi`` and ``e``,
binary ``+ - * /``, unary ``-`` and ``+``, parentheses and the functions
``sin``, ``cos`` and ``exp``. Anything else is rejected with a ConfigError.
"""

import re
from tokenize import TokenError
from typing import Optional

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from nonstrict.errors import ConfigError

X = sp.Symbol('x', real=True)

NAMES = {
    'x': X,
    'pi': sp.pi,
    'e': sp.E,
    'sin': sp.sin,
    'cos': sp.cos,
    'exp': sp.exp,
}
FUNCTIONS = (sp.sin, sp.cos, sp.exp)

# Only the constructors parse_expr emits for numbers and names; no builtins
PARSER_GLOBALS = {
    '__builtins__': {},
    'Integer': sp.Integer,
    'Float': sp.Float,
    'Rational': sp.Rational,
    'Symbol': sp.Symbol,
    'Function': sp.Function,
}

TOKEN = re.compile(r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
                   r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/()]))")


class Expr:
    """A parsed expression; calling it evaluates on numpy arrays."""

    def __init__(self, tree: sp.Expr, source: Optional[str] = None):
        self.tree = tree
        self.source = source if source is not None else sp.sstr(tree)
        self._fn = sp.lambdify(X, tree, 'numpy')

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self._fn(x), dtype=float), x.shape).astype(float)

    def derivative(self) -> 'Expr':
        return Expr(sp.diff(self.tree, X))

    def __str__(self):
        return self.source

    def __repr__(self):
        return f"Expr({self.source!r})"


def _check_tokens(text: str) -> None:
    if '**' in text:
        raise ConfigError(f"Power is not part of the grammar in expression '{text}'")
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        match = TOKEN.match(stripped, pos)
        if match is None:
            raise ConfigError(f"Unexpected character {stripped[pos:].lstrip()[:1]!r} in expression '{text}'")
        name = match.group('name')
        if name is not None and name not in NAMES:
            raise ConfigError(f"Unknown name '{name}' in expression '{text}'")
        pos = match.end()


def _check_tree(tree: sp.Expr, text: str) -> None:
    extra = tree.free_symbols - {X}
    if extra:
        raise ConfigError(f"Unknown name(s) {sorted(map(str, extra))} in expression '{text}'")
    for call in tree.atoms(sp.Function):
        if not isinstance(call, FUNCTIONS):
            raise ConfigError(f"Only sin, cos and exp may be called in expression '{text}'")
    if tree.has(sp.zoo, sp.oo, -sp.oo, sp.nan):
        raise ConfigError(f"Expression '{text}' is not finite")


def parse_expression(text) -> Expr:
    """
    Parse a profile expression.

    Args:
        text: Expression string, or a bare number

    Returns:
        Parsed expression

    Raises:
        ConfigError: On syntax errors or tokens outside the grammar
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        if not np.isfinite(text):
            raise ConfigError(f"Expression must be finite, got {text!r}")
        return Expr(sp.Float(float(text)), repr(float(text)))
    if not isinstance(text, str) or not text.strip():
        raise ConfigError(f"Expression must be a non-empty string, got {text!r}")

    _check_tokens(text)
    try:
        tree = parse_expr(text.strip(), local_dict=dict(NAMES), global_dict=dict(PARSER_GLOBALS),
                          transformations=standard_transformations)
    except (SyntaxError, TokenError, TypeError, ValueError, sp.SympifyError) as e:
        raise ConfigError(f"Cannot parse expression '{text}': {e}") from e
    if not isinstance(tree, sp.Expr):
        raise ConfigError(f"Expression '{text}' is not arithmetic")
    _check_tree(tree, text)
    return Expr(tree, text.strip())


def evaluate_constant(text) -> float:
    """Evaluate an expression that must not depend on x (e.g. a domain bound)."""
    expr = parse_expression(text)
    if depends_on_x(expr):
        raise ConfigError(f"Expression '{text}' must not depend on x")
    return float(expr.tree.evalf())


def depends_on_x(expr: Expr) -> bool:
    """True unless the expression simplifies to a constant."""
    return X in expr.tree.free_symbols
