#!/usr/bin/env python3
"""Validation script to check if nonstrict is properly configured."""

import json
import sys
from pathlib import Path

# Colors for output
GREEN = '\033[92m'
RED = '\033[91m'
YELLOW = '\033[93m'
RESET = '\033[0m'

CONFIG_DIR = Path('nonstrict/config')

def print_success(msg):
    print(f"{GREEN}✓{RESET} {msg}")

def print_error(msg):
    print(f"{RED}✗{RESET} {msg}")

def print_warning(msg):
    print(f"{YELLOW}⚠{RESET} {msg}")

def check_python_version():
    """Check Python version."""
    if sys.version_info >= (3, 10):
        print_success(f"Python version: {sys.version.split()[0]}")
        return True
    else:
        print_error(f"Python version too old: {sys.version.split()[0]} (need 3.10+)")
        return False

def check_dependencies():
    """Check if required dependencies are installed."""
    required = [
        ('numpy', 'NumPy (arrays, linear algebra)'),
        ('scipy', 'SciPy (expm, quadrature, root bracketing, splines)'),
        ('sympy', 'SymPy (profile expressions and their derivatives)'),
        ('dotenv', 'python-dotenv'),
        ('pythonjsonlogger', 'python-json-logger (JSON log files)'),
    ]

    all_ok = True
    for module, desc in required:
        try:
            __import__(module)
            print_success(f"{desc}")
        except ImportError:
            print_error(f"{desc} - NOT INSTALLED")
            all_ok = False

    return all_ok

def check_config_files():
    """Check that every bundled run configuration parses and names a known command."""
    from nonstrict.commands import COMMANDS
    from nonstrict.commands.base_command import command_name

    paths = sorted(CONFIG_DIR.glob('*.json'))
    if not paths:
        print_error(f"No configurations found in {CONFIG_DIR}")
        return False

    all_ok = True
    for path in paths:
        try:
            with open(path) as f:
                name = command_name(json.load(f))
        except Exception as e:
            print_error(f"{path}: {e}")
            all_ok = False
            continue
        if name in COMMANDS:
            print_success(f"{path} ({name})")
        else:
            print_error(f"{path}: unknown command '{name}'")
            all_ok = False

    return all_ok

def check_env_file():
    """Check if a .env file exists (optional)."""
    env_path = Path('.env')
    if not env_path.exists():
        print_warning(".env file not found (defaults: LOG_LEVEL=INFO, NONSTRICT_WORKERS=1)")
        return True

    from dotenv import dotenv_values
    values = dotenv_values(env_path)
    workers = values.get('NONSTRICT_WORKERS')
    if workers and not workers.isdigit():
        print_error(f"NONSTRICT_WORKERS must be a positive integer, got '{workers}'")
        return False
    print_success(f".env file exists ({', '.join(sorted(values)) or 'empty'})")
    return True

def check_project_structure():
    """Check if project structure is correct."""
    required_dirs = [
        'nonstrict',
        'nonstrict/config',
        'nonstrict/core',
        'nonstrict/criteria',
        'nonstrict/models',
        'nonstrict/numkit',
        'nonstrict/waves',
        'nonstrict/stochastic',
        'nonstrict/parabolic',
        'nonstrict/output',
        'nonstrict/commands',
        'nonstrict/utils',
    ]

    all_ok = True
    for dir_path in required_dirs:
        if Path(dir_path).is_dir():
            print_success(f"Directory exists: {dir_path}")
        else:
            print_error(f"Directory missing: {dir_path}")
            all_ok = False

    return all_ok

def check_smoke_run():
    """Compute T* for V0 = (0, x) on the cold plasma model (expected pi/2)."""
    import math

    from nonstrict.core import InitialProfile, blowup_report
    from nonstrict.models import build

    prof = InitialProfile.from_expressions(['0', 'x'], (-1.0, 1.0))
    report = blowup_report(build('cold_plasma').spec, prof, [0.0], Tmax=10.0)
    if report.t_star is not None and abs(report.t_star - math.pi / 2) < 1e-6:
        print_success(f"Blow-up time T* = {report.t_star:.12f}")
        return True
    print_error(f"Unexpected blow-up time: {report.t_star}")
    return False

def test_import_modules():
    """Test if main modules can be imported."""
    modules = [
        'nonstrict.utils.logger',
        'nonstrict.numkit.ode',
        'nonstrict.core.blowup',
        'nonstrict.criteria.davidson_criterion',
        'nonstrict.waves.bloodflow',
        'nonstrict.stochastic.estimation',
        'nonstrict.parabolic.fd_solver',
        'nonstrict.main',
    ]

    all_ok = True
    for module in modules:
        try:
            __import__(module)
            print_success(f"Module imports OK: {module}")
        except Exception as e:
            print_error(f"Module import failed: {module}")
            print(f"  Error: {e}")
            all_ok = False

    return all_ok

def main():
    """Run all validation checks."""
    print("=" * 60)
    print("nonstrict - Setup Validation")
    print("=" * 60)

    checks = [
        ("Python Version", check_python_version),
        ("Dependencies", check_dependencies),
        ("Project Structure", check_project_structure),
        ("Environment File", check_env_file),
        ("Module Imports", test_import_modules),
        ("Config Files", check_config_files),
        ("Smoke Run", check_smoke_run),
    ]

    results = []

    for name, check_func in checks:
        print(f"\n--- {name} ---")
        try:
            result = check_func()
            results.append((name, result))
        except Exception as e:
            print_error(f"Check failed with exception: {e}")
            results.append((name, False))

    # Summary
    print("\n" + "=" * 60)
    print("Summary")
    print("=" * 60)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for name, result in results:
        status = f"{GREEN}PASS{RESET}" if result else f"{RED}FAIL{RESET}"
        print(f"{status} - {name}")

    print(f"\n{passed}/{total} checks passed")

    if passed == total:
        print(f"\n{GREEN}✓ All checks passed! You're ready to run an analysis.{RESET}")
        print("\nNext steps:")
        print("  1. python -m nonstrict.main                                  # Default analysis")
        print("  2. python -m nonstrict.main nonstrict/config/simulate.json   # Solution table")
        print("  3. Check output/ for the JSON reports and CSV tables")
        return 0
    else:
        print(f"\n{RED}✗ Some checks failed. Please fix the issues above.{RESET}")
        return 1

if __name__ == '__main__':
    sys.exit(main())
