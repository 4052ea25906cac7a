"""Problem descriptions: the system V_t + V_1 V_x = QV (+ B V_xx) and its initial data."""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from nonstrict.numkit.linalg import as_matrix
from nonstrict.utils.expressions import Expr, parse_expression
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

CHECK_POINTS = 16
CHECK_RTOL = 1e-2


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """
    One instance of V_t + V_1 V_x = QV + B V_xx.

    Attributes:
        n: Number of components
        Q: n x n coupling matrix
        B: Optional n x n diffusion matrix (None for the hyperbolic system)
        label: Human readable name
    """

    n: int
    Q: np.ndarray
    B: Optional[np.ndarray] = None
    label: str = ''

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        Q = as_matrix(self.Q, 'Q')
        if Q.shape != (self.n, self.n):
            raise ValueError(f"Q must be {self.n}x{self.n}, got {Q.shape}")
        object.__setattr__(self, 'Q', _frozen(Q))
        if self.B is not None:
            B = as_matrix(self.B, 'B')
            if B.shape != (self.n, self.n):
                raise ValueError(f"B must be {self.n}x{self.n}, got {B.shape}")
            object.__setattr__(self, 'B', _frozen(B))

    @property
    def has_diffusion(self) -> bool:
        return self.B is not None and bool(np.any(self.B != 0.0))

    def inviscid(self) -> 'SystemSpec':
        """The same system with B removed."""
        return SystemSpec(self.n, self.Q, None, self.label)

    def same_as(self, other: 'SystemSpec') -> bool:
        """Structural equality of n, Q and B (a missing B equals a zero B)."""
        if self.n != other.n or not np.array_equal(self.Q, other.Q):
            return False
        mine = self.B if self.B is not None else np.zeros((self.n, self.n))
        theirs = other.B if other.B is not None else np.zeros((other.n, other.n))
        return bool(np.array_equal(mine, theirs))

    def to_dict(self):
        return {
            'label': self.label,
            'n': self.n,
            'Q': self.Q.tolist(),
            'B': None if self.B is None else self.B.tolist(),
        }


VectorFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class InitialProfile:
    """
    Initial data V_0(x) with its first derivative.

    `value_fn` and `derivative_fn` map an array of N positions to an (n, N)
    array. Use the from_* constructors rather than building one directly.
    """

    n: int
    value_fn: VectorFunction
    derivative_fn: VectorFunction
    domain: Tuple[float, float]
    periodic: bool = False
    label: str = ''
    sources: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        lo, hi = float(self.domain[0]), float(self.domain[1])
        if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
            raise ValueError(f"Profile domain must satisfy lo < hi, got {self.domain}")
        object.__setattr__(self, 'domain', (lo, hi))

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    def contains(self, x: float, slack: float = 1e-12) -> bool:
        lo, hi = self.domain
        pad = slack * max(1.0, abs(lo), abs(hi))
        return lo - pad <= x <= hi + pad

    def wrap(self, xs) -> np.ndarray:
        """Map positions into the domain for periodic profiles (identity otherwise)."""
        xs = np.asarray(xs, dtype=float)
        if not self.periodic:
            return xs
        lo = self.domain[0]
        return lo + np.mod(xs - lo, self.length)

    def _eval(self, fn: VectorFunction, xs) -> np.ndarray:
        scalar = np.ndim(xs) == 0
        pts = np.atleast_1d(self.wrap(xs))
        out = np.asarray(fn(pts), dtype=float).reshape(self.n, pts.size)
        return out[:, 0] if scalar else out

    def value(self, xs) -> np.ndarray:
        """V_0 at xs: shape (n,) for a scalar, (n, N) for an array."""
        return self._eval(self.value_fn, xs)

    def derivative(self, xs) -> np.ndarray:
        """V_0' at xs, shaped like value()."""
        return self._eval(self.derivative_fn, xs)

    def default_grid(self, points: int = 512) -> np.ndarray:
        """Uniform grid over the domain (right end excluded when periodic)."""
        lo, hi = self.domain
        return np.linspace(lo, hi, points, endpoint=not self.periodic)

    def validate(self) -> None:
        """
        Check value and derivative agree under central differences.

        Raises:
            ValueError: If either is non-finite or they disagree beyond 1e-2 relative
        """
        lo, hi = self.domain
        h = 1e-4 * self.length
        samples = np.linspace(lo + 2 * h, hi - 2 * h, CHECK_POINTS)
        values = self.value(samples)
        derivs = self.derivative(samples)
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(derivs))):
            raise ValueError(f"Profile '{self.label}' is non-finite on its domain")

        central = (self.value(samples + h) - self.value(samples - h)) / (2 * h)
        for i in range(self.n):
            scale = max(1.0, float(np.max(np.abs(derivs[i]))))
            worst = float(np.max(np.abs(central[i] - derivs[i])))
            if worst > CHECK_RTOL * scale:
                raise ValueError(
                    f"Profile '{self.label}' component {i}: derivative disagrees with "
                    f"central differences by {worst:.3e}"
                )

    @classmethod
    def from_functions(
        cls,
        values: Sequence[Callable],
        derivatives: Sequence[Callable],
        domain: Sequence[float],
        periodic: bool = False,
        label: str = 'functions',
        validate: bool = True
    ) -> 'InitialProfile':
        """
        Build from per-component vectorized callables.

        Args:
            values: One callable per component, x-array -> array
            derivatives: Matching derivative callables
            domain: [lo, hi]
            periodic: Whether the data is periodic on the domain
            label: Name used in logs
            validate: Run the central-difference consistency check

        Returns:
            InitialProfile
        """
        if len(values) != len(derivatives) or not values:
            raise ValueError("values and derivatives must be non-empty and of equal length")
        n = len(values)

        def stack(fns):
            return lambda xs: np.vstack([np.broadcast_to(np.asarray(fn(xs), dtype=float), xs.shape)
                                         for fn in fns])

        profile = cls(n, stack(values), stack(derivatives), tuple(domain), periodic, label)
        if validate:
            profile.validate()
        return profile

    @classmethod
    def from_expressions(
        cls,
        expressions: Sequence,
        domain: Sequence[float],
        periodic: bool = False,
        validate: bool = True
    ) -> 'InitialProfile':
        """
        Build from expression strings; derivatives are exact symbolic ones.

        Raises:
            ConfigError: If an expression falls outside the grammar
        """
        trees = [e if isinstance(e, Expr) else parse_expression(e) for e in expressions]
        derivs = [tree.derivative() for tree in trees]
        sources = tuple(str(e) for e in expressions)
        profile = cls.from_functions(trees, derivs, domain, periodic,
                                     label=', '.join(sources), validate=validate)
        object.__setattr__(profile, 'sources', sources)
        return profile

    @classmethod
    def from_samples(
        cls,
        x: Sequence[float],
        samples,
        periodic: bool = False,
        label: str = 'samples'
    ) -> 'InitialProfile':
        """
        Build from a sampled table by cubic-spline interpolation.

        The derivative is the spline's derivative. Periodic tables must repeat
        the first row at the right end of the domain.

        Args:
            x: Strictly increasing sample positions
            samples: Array (n, N) of component values
            periodic: Use periodic spline end conditions
            label: Name used in logs

        Returns:
            InitialProfile on [x[0], x[-1]]
        """
        xs = np.asarray(x, dtype=float)
        ys = np.atleast_2d(np.asarray(samples, dtype=float))
        if ys.shape[1] != xs.size:
            raise ValueError(f"samples must have shape (n, {xs.size}), got {ys.shape}")
        if xs.size < 4 or np.any(np.diff(xs) <= 0):
            raise ValueError("Sample positions must be strictly increasing with at least 4 points")
        if not np.all(np.isfinite(ys)):
            raise ValueError("Sampled profile has non-finite values")

        if periodic:
            scale = max(1.0, float(np.max(np.abs(ys))))
            if np.max(np.abs(ys[:, -1] - ys[:, 0])) > 1e-8 * scale:
                raise ValueError("Periodic table must repeat its first row at the right end")
            ys = ys.copy()
            ys[:, -1] = ys[:, 0]
            spline = CubicSpline(xs, ys, axis=1, bc_type='periodic')
        else:
            spline = CubicSpline(xs, ys, axis=1)
        slope = spline.derivative()

        profile = cls(ys.shape[0], spline, slope, (xs[0], xs[-1]), periodic, label)
        profile.validate()
        return profile


def augmented_matrix(sys: SystemSpec) -> np.ndarray:
    """
    Coefficient matrix of the linearized derivative system.

    Returns the (n+1)x(n+1) matrix with M[0, 1] = 1 and Q in the lower-right
    block; (q, u) along a characteristic solve (q, u)' = M (q, u).
    """
    M = np.zeros((sys.n + 1, sys.n + 1))
    M[0, 1] = 1.0
    M[1:, 1:] = sys.Q
    return M
