"""Base command abstract class."""

import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from nonstrict.core.system import InitialProfile
from nonstrict.errors import ConfigError
from nonstrict.models.catalog import ModelEntry, build
from nonstrict.output.report_writer import ReportWriter, read_csv
from nonstrict.utils.expressions import evaluate_constant
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

PROFILE_KEYS = {'components', 'domain', 'periodic', 'table'}
GRID_KEYS = {'points', 'x'}
OUTPUT_KEYS = {'dir', 'report', 'csv'}


def command_options(config: Dict[str, Any]) -> Dict[str, Any]:
    """Options of the 'command' entry ({} when it is a bare name)."""
    command = config.get('command')
    if isinstance(command, dict):
        return {k: v for k, v in command.items() if k != 'name'}
    return {}


def command_name(config: Dict[str, Any]) -> str:
    command = config.get('command')
    name = command.get('name') if isinstance(command, dict) else command
    if not isinstance(name, str) or not name:
        raise ConfigError("Configuration needs a command name")
    return name


def _check_keys(section: str, given: Dict[str, Any], allowed) -> None:
    unknown = sorted(set(given) - set(allowed))
    if unknown:
        raise ConfigError(f"Unknown key(s) in '{section}': {', '.join(unknown)}")


def build_profile(profile_config: Dict[str, Any], base_dir: Optional[Path] = None) -> InitialProfile:
    """
    Build the initial profile from the 'profile' section.

    Either {"components": [expr, ...], "domain": [lo, hi], "periodic": bool}
    or {"table": "file.csv", "periodic": bool}. Table files hold an x column
    followed by one column per component; '#' lines are skipped.

    Raises:
        ConfigError: Malformed section, grammar violation or bad table
    """
    if not isinstance(profile_config, dict):
        raise ConfigError("'profile' must be an object")
    _check_keys('profile', profile_config, PROFILE_KEYS)
    periodic = bool(profile_config.get('periodic', False))

    if 'table' in profile_config:
        if 'components' in profile_config:
            raise ConfigError("'profile' takes either 'table' or 'components', not both")
        path = Path(profile_config['table'])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            _, header, data = read_csv(path)
        except (OSError, ValueError, StopIteration) as e:
            raise ConfigError(f"Cannot read profile table {path}: {e}") from e
        if len(header) < 2:
            raise ConfigError(f"Profile table {path} needs an x column and at least one component")
        try:
            return InitialProfile.from_samples(data[:, 0], data[:, 1:].T, periodic, label=str(path))
        except ValueError as e:
            raise ConfigError(f"Invalid profile table {path}: {e}") from e

    components = profile_config.get('components')
    domain = profile_config.get('domain')
    if not isinstance(components, list) or not components:
        raise ConfigError("'profile.components' must be a non-empty list of expressions")
    if not isinstance(domain, list) or len(domain) != 2:
        raise ConfigError("'profile.domain' must be [lo, hi]")
    bounds = [evaluate_constant(b) for b in domain]
    try:
        return InitialProfile.from_expressions(components, bounds, periodic)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"Invalid profile: {e}") from e


def build_grid(grid_config: Optional[Dict[str, Any]], prof: InitialProfile, default_points: int) -> np.ndarray:
    """Points from the 'grid' section: {"points": int} or {"x": [..]}."""
    grid_config = grid_config or {}
    if not isinstance(grid_config, dict):
        raise ConfigError("'grid' must be an object")
    _check_keys('grid', grid_config, GRID_KEYS)
    if 'x' in grid_config:
        if 'points' in grid_config:
            raise ConfigError("'grid' takes either 'points' or 'x', not both")
        xs = np.array([evaluate_constant(v) for v in grid_config['x']], dtype=float)
        if xs.size == 0:
            raise ConfigError("'grid.x' must not be empty")
        outside = [x for x in xs if not prof.contains(x)]
        if outside:
            raise ConfigError(f"Grid point {outside[0]} lies outside the profile domain {prof.domain}")
        return xs
    points = grid_config.get('points', default_points)
    if not isinstance(points, int) or isinstance(points, bool) or points < 1:
        raise ConfigError(f"'grid.points' must be a positive integer, got {points!r}")
    return prof.default_grid(points)


class BaseCommand(ABC):
    """Abstract base class for all commands."""

    name = 'command'
    # option -> default; options not listed here are rejected
    OPTIONS: Dict[str, Any] = {}
    needs_model = True
    needs_profile = True

    def __init__(self, config: Dict[str, Any], base_dir: Optional[Path] = None):
        """
        Initialize base command.

        Args:
            config: Validated run configuration
            base_dir: Directory that relative table paths are resolved against
        """
        self.config = config
        self.base_dir = base_dir
        self.options = self._resolve_options(command_options(config))
        output = config.get('output') or {}
        _check_keys('output', output, OUTPUT_KEYS)
        self.output_dir = output.get('dir', 'output')
        self.report_name = output.get('report', f"{self.name}.json")
        self.csv_name = output.get('csv', f"{self.name}.csv")
        self.stats: Dict[str, Any] = {}
        self._writer: Optional[ReportWriter] = None

    def _resolve_options(self, given: Dict[str, Any]) -> Dict[str, Any]:
        _check_keys(f"command '{self.name}'", given, self.OPTIONS)
        options = dict(self.OPTIONS)
        options.update(given)
        return options

    @property
    def writer(self) -> ReportWriter:
        if self._writer is None:
            self._writer = ReportWriter(self.output_dir, self.config, self.seed)
        return self._writer

    @property
    def seed(self) -> Optional[int]:
        return self.options.get('seed')

    def model(self) -> ModelEntry:
        name = self.config.get('model')
        if not isinstance(name, str):
            raise ConfigError("Configuration needs a 'model' name")
        params = self.config.get('params') or {}
        if not isinstance(params, dict):
            raise ConfigError("'params' must be an object")
        return build(name, params)

    def profile(self, entry: Optional[ModelEntry] = None) -> InitialProfile:
        if 'profile' not in self.config:
            raise ConfigError(f"Command '{self.name}' needs a 'profile' section")
        prof = build_profile(self.config['profile'], self.base_dir)
        if entry is not None and prof.n != entry.spec.n:
            raise ConfigError(f"Profile has {prof.n} components but model '{entry.name}' has n={entry.spec.n}")
        return prof

    def grid(self, prof: InitialProfile, default_points: int) -> np.ndarray:
        return build_grid(self.config.get('grid'), prof, default_points)

    def number(self, key: str, lower: float = -math.inf, strict: bool = False,
               allow_none: bool = False) -> Optional[float]:
        """Numeric option, range-checked."""
        value = self.options.get(key)
        if value is None and allow_none:
            return None
        try:
            value = evaluate_constant(value) if isinstance(value, str) else float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"Option '{key}' of command '{self.name}' must be a number, got {value!r}")
        if not math.isfinite(value) or value < lower or (strict and value == lower):
            bound = '>' if strict else '>='
            raise ConfigError(f"Option '{key}' of command '{self.name}' must be finite and {bound} {lower}, got {value}")
        return value

    def numbers(self, key: str) -> List[float]:
        value = self.options.get(key)
        if not isinstance(value, list):
            raise ConfigError(f"Option '{key}' of command '{self.name}' must be a list")
        try:
            return [evaluate_constant(v) if isinstance(v, str) else float(v) for v in value]
        except (TypeError, ValueError):
            raise ConfigError(f"Option '{key}' of command '{self.name}' must hold numbers, got {value!r}")

    @abstractmethod
    def execute(self) -> None:
        """Run the analysis and write its outputs."""
        pass

    def run(self) -> Dict[str, Any]:
        """
        Execute the command with banner and statistics logging.

        Returns:
            Statistics dictionary
        """
        logger.info("=" * 60)
        logger.info(f"Starting command: {self.name}")
        logger.info("=" * 60)

        self.execute()

        logger.info(f"Command '{self.name}' completed:")
        for key, value in self.stats.items():
            logger.info(f"  - {key.replace('_', ' ').capitalize()}: {value}")
        if self._writer is not None:
            for path in self._writer.written:
                logger.info(f"  - Output: {path}")
        return self.stats
