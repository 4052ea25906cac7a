"""Particle realization of the noisy characteristics dX = V_1 dt + sigma dW, dV = QV dt."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from nonstrict.core.blowup import default_workers
from nonstrict.core.system import InitialProfile, SystemSpec
from nonstrict.errors import NumericalError
from nonstrict.numkit.linalg import expm
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

# particles per random stream; fixed so results do not depend on the worker count
BLOCK_SIZE = 8192

Sampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass
class ParticleEnsemble:
    """
    Particles X_i(t) with the states they carry.

    Attributes:
        positions: (N,) particle positions, wrapped into the domain when periodic
        states: (n, N) carried solution vectors
        t: Time reached
        sigma: Noise intensity
        seed: Root seed of the random streams
        dt: Time step actually used
        steps: Number of steps taken
        domain: Profile domain
        periodic: Whether positions are wrapped
    """

    positions: np.ndarray
    states: np.ndarray
    t: float
    sigma: float
    seed: int
    dt: float
    steps: int
    domain: Tuple[float, float]
    periodic: bool

    def __post_init__(self):
        if self.positions.size == 0 or self.states.shape[1] != self.positions.size:
            raise ValueError(
                f"Ensemble needs matching non-empty positions and states, got "
                f"{self.positions.size} positions and {self.states.shape[1]} states"
            )

    @property
    def size(self) -> int:
        return int(self.positions.size)

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream for one block of particles."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def uniform_sampler(domain: Tuple[float, float]) -> Sampler:
    lo, hi = domain
    return lambda rng, m: rng.uniform(lo, hi, m)


def time_grid(t_end: float, dt: float) -> Tuple[int, float]:
    """Number of steps and the step that lands exactly on t_end."""
    if t_end == 0:
        return 0, dt
    steps = max(1, int(round(t_end / dt)))
    return steps, t_end / steps


def _evolve_block(
    prof: InitialProfile,
    propagator: np.ndarray,
    sampler: Sampler,
    sigma: float,
    size: int,
    steps: int,
    h: float,
    seed: int,
    block: int
) -> Tuple[np.ndarray, np.ndarray]:
    rng = block_rng(seed, block)
    x = np.asarray(sampler(rng, size), dtype=float).reshape(size)
    if not prof.periodic:
        lo, hi = prof.domain
        if np.any((x < lo) | (x > hi)):
            raise ValueError(f"Initial positions must lie in the domain {prof.domain}")
    V = prof.value(x)
    kick = sigma * np.sqrt(h)

    for step in range(steps):
        drift = V[0]
        if not np.all(np.isfinite(drift)):
            k = int(np.flatnonzero(~np.isfinite(drift))[0])
            raise NumericalError(f"Non-finite drift V_1={drift[k]} at step {step} (block {block}, particle {k})")
        x = x + drift * h
        if sigma > 0:
            x = x + kick * rng.standard_normal(size)
        V = propagator @ V
        if prof.periodic:
            x = prof.wrap(x)
    return x, V


def evolve_ensemble(
    sys: SystemSpec,
    prof: InitialProfile,
    f0_sampler: Optional[Sampler] = None,
    sigma: float = 0.0,
    N: int = 10_000,
    t_end: float = 1.0,
    dt: float = 1e-2,
    seed: int = 0,
    workers: Optional[int] = None
) -> ParticleEnsemble:
    """
    Evolve N particles to t_end.

    Positions follow Euler-Maruyama, X <- X + V_1 dt + sigma sqrt(dt) Z; the
    carried state is advanced exactly by expm(Q dt). Particles are split into
    blocks of BLOCK_SIZE, each drawing from its own Philox stream keyed by
    (seed, block), so a fixed seed gives identical ensembles for any number
    of workers.

    Args:
        sys: System (B is ignored)
        prof: Initial profile, sampled at the initial positions
        f0_sampler: Callable (rng, m) -> m initial positions; uniform on the domain by default
        sigma: Noise intensity
        N: Number of particles
        t_end: Final time
        dt: Requested step; adjusted so that an integer number of steps reaches t_end
        seed: Root seed
        workers: Threads over blocks (default NONSTRICT_WORKERS)

    Returns:
        ParticleEnsemble at t_end

    Raises:
        ValueError: Invalid N, dt, sigma or t_end
        NumericalError: Non-finite drift
    """
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not sigma >= 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if not t_end >= 0:
        raise ValueError(f"t_end must be non-negative, got {t_end}")
    if prof.n != sys.n:
        raise ValueError(f"Profile has {prof.n} components, system has {sys.n}")

    N = int(N)
    steps, h = time_grid(float(t_end), float(dt))
    propagator = expm(sys.Q, h)
    sampler = f0_sampler or uniform_sampler(prof.domain)
    sizes: List[int] = [min(BLOCK_SIZE, N - start) for start in range(0, N, BLOCK_SIZE)]

    def run(block: int):
        return _evolve_block(prof, propagator, sampler, float(sigma), sizes[block], steps, h, seed, block)

    workers = workers or default_workers()
    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(block) for block in range(len(sizes))]

    positions = np.concatenate([p[0] for p in parts])
    states = np.hstack([p[1] for p in parts])
    logger.debug(f"Evolved {N} particles over {steps} steps of {h:.4g} (sigma={sigma}, seed={seed})")
    return ParticleEnsemble(positions, states, float(t_end), float(sigma), int(seed), h, steps,
                            prof.domain, prof.periodic)
