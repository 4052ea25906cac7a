"""Main CLI application for nonstrict."""

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from nonstrict import __version__
from nonstrict.commands import COMMANDS, BaseCommand, command_name
from nonstrict.errors import ConfigError, CriterionMismatchError, NumericalError
from nonstrict.output import config_hash
from nonstrict.utils.logger import bind_run_context, get_logger, setup_logger

# Load environment variables
load_dotenv()

logger = get_logger('nonstrict.main')

DEFAULT_CONFIG = Path(__file__).parent / 'config' / 'config.json'
TOP_LEVEL_KEYS = {'command', 'model', 'params', 'profile', 'grid', 'output'}

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_MISMATCH = 4


def load_config(config_path=DEFAULT_CONFIG) -> Dict[str, Any]:
    """
    Load a run configuration from a JSON file.

    Args:
        config_path: Path to configuration file

    Returns:
        Configuration dictionary
    """
    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = json.load(f)
    except FileNotFoundError:
        logger.error(f"Configuration file not found: {config_path}")
        sys.exit(EXIT_CONFIG)
    except json.JSONDecodeError as e:
        logger.error(f"Error parsing configuration file: {e}")
        sys.exit(EXIT_CONFIG)
    return config


def validate_config(config: Any) -> None:
    """
    Check the top-level structure before dispatch.

    Raises:
        ConfigError: Not an object, unknown keys, unknown command or missing sections
    """
    if not isinstance(config, dict):
        raise ConfigError("Configuration must be a JSON object")
    unknown = sorted(set(config) - TOP_LEVEL_KEYS)
    if unknown:
        raise ConfigError(f"Unknown top-level key(s): {', '.join(unknown)}")
    name = command_name(config)
    if name not in COMMANDS:
        raise ConfigError(f"Unknown command '{name}'. Available: {', '.join(COMMANDS)}")
    command = COMMANDS[name]
    if command.needs_model and 'model' not in config:
        raise ConfigError(f"Command '{name}' needs a 'model'")
    if command.needs_profile and 'profile' not in config:
        raise ConfigError(f"Command '{name}' needs a 'profile'")


def get_command(config: Dict[str, Any], base_dir: Optional[Path] = None) -> BaseCommand:
    """
    Factory function to create the command named in the configuration.

    Args:
        config: Run configuration
        base_dir: Directory relative table paths are resolved against

    Returns:
        Command instance
    """
    validate_config(config)
    return COMMANDS[command_name(config)](config, base_dir)


def run(config: Dict[str, Any], base_dir: Optional[Path] = None) -> int:
    """
    Dispatch a configuration and map failures to exit codes.

    Returns:
        0 on success, 2 for configuration errors, 3 for numerical failures,
        4 when a closed-form criterion disagrees with the q-scan
    """
    try:
        command = get_command(config, base_dir)
        bind_run_context('nonstrict', command=command.name, config_hash=config_hash(config))
        command.run()
        return EXIT_OK
    except CriterionMismatchError as e:
        logger.error(f"Criterion mismatch: {e}")
        return EXIT_MISMATCH
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except ValueError as e:
        # ConfigError and library precondition failures alike
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog='nonstrict',
        description='Blow-up analysis and wave solutions for V_t + V_1 V_x = QV'
    )
    parser.add_argument('config', nargs='?', default=str(DEFAULT_CONFIG), help='Run configuration (JSON)')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING, ERROR (default: $LOG_LEVEL or INFO)')
    parser.add_argument('--log-file', default=None, help='Also write JSON log lines here (default: $LOG_FILE)')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    args = parse_args(argv)

    # Setup logger
    log_level = args.log_level or os.getenv('LOG_LEVEL', 'INFO')
    log_file = args.log_file or os.getenv('LOG_FILE') or None
    setup_logger('nonstrict', level=log_level, log_file=log_file)

    logger.info("=" * 60)
    logger.info(f"nonstrict {__version__} - Starting")
    logger.info("=" * 60)

    config_path = Path(args.config)
    config = load_config(config_path)
    code = run(config, config_path.parent)

    logger.info("=" * 60)
    logger.info(f"nonstrict - {'Complete' if code == EXIT_OK else f'Failed (exit code {code})'}")
    logger.info("=" * 60)
    return code


if __name__ == '__main__':
    sys.exit(main())
