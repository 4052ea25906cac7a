"""Test script to verify all imports work correctly."""

import sys

def test_imports():
    """Test that all modules can be imported."""
    print("Testing imports...")

    try:
        # Test utilities
        from nonstrict.utils.logger import setup_logger, get_logger
        from nonstrict.utils.expressions import parse_expression, evaluate_constant
        from nonstrict.errors import ConfigError, NumericalError, BlowupError, CriterionMismatchError
        print("✓ Utils imports OK")

        # Test numerical kit
        from nonstrict.numkit import expm, integrate_ode, find_first_root, quad_sqrt_singular
        print("✓ Numkit imports OK")

        # Test core
        from nonstrict.core import SystemSpec, InitialProfile, characteristic_solve, grid_solution, blowup_report
        from nonstrict.models import build, list_models
        print("✓ Core imports OK")

        # Test criteria
        from nonstrict.criteria.base_criterion import BaseCriterion
        from nonstrict.criteria.cold_plasma_criterion import ColdPlasmaCriterion
        from nonstrict.criteria.davidson_criterion import DavidsonCriterion
        from nonstrict.criteria import get_criterion
        print("✓ Criteria imports OK")

        # Test solvers
        from nonstrict.waves import simple_wave_curve, tw_inviscid, bloodflow_period, linearized_tw_roots
        from nonstrict.stochastic import evolve_ensemble, estimate_fields, convergence_study
        from nonstrict.parabolic import fd_solve, cfl_limits
        from nonstrict.output import ReportWriter, read_csv, read_report
        print("✓ Solver imports OK")

        # Test commands and main
        from nonstrict.commands import COMMANDS, BaseCommand
        from nonstrict.main import load_config, get_command, run
        print("✓ Main imports OK")

        print("\n✓ All imports successful!")
        return True

    except ImportError as e:
        print(f"\n✗ Import error: {e}")
        return False

if __name__ == '__main__':
    success = test_imports()
    sys.exit(0 if success else 1)
