#!/usr/bin/env python3
"""
Test runner for Polydist

Runs the exact linear algebra, polytope core, knapsack gadget, silo, rock
extension, serialization, verification suite and command line scripts, each
through its main(), and reports one combined result. Pass module names (for
example test_cli) to run a subset. pytest collects the same files directly.
"""

import importlib
import os
import sys

from colorama import Fore, Style, init

# Initialize colorama
init(autoreset=True)

# The library and polydist.py live one level up
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

TEST_DIR = os.path.dirname(os.path.abspath(__file__))


def find_test_modules(selected=None):
    """Sorted test_* module names, restricted to selected when given"""
    names = sorted(f[:-3] for f in os.listdir(TEST_DIR) if f.startswith("test_") and f.endswith(".py"))
    if selected:
        unknown = sorted(set(selected) - set(names))
        if unknown:
            print(f"{Fore.YELLOW}Unknown test modules: {', '.join(unknown)}{Style.RESET_ALL}")
        names = [name for name in names if name in selected]
    return names


def run_module(name):
    """Import tests.<name> and run its main(); True when it returned 0"""
    module = importlib.import_module(f"tests.{name}")
    if not hasattr(module, "main"):
        print(f"{Fore.YELLOW}{name} has no main(); skipped{Style.RESET_ALL}")
        return True
    return module.main() == 0


def discover_and_run_tests(selected=None):
    """
    Run the Polydist test scripts

    Args:
        selected: Optional module names to restrict the run

    Returns:
        0 if every script passed, 1 otherwise
    """
    modules = find_test_modules(selected)
    if not modules:
        print(f"{Fore.YELLOW}No test modules to run{Style.RESET_ALL}")
        return 0

    print(f"{Fore.CYAN}Polydist: {len(modules)} test modules{Style.RESET_ALL}\n")
    failed = []
    for name in modules:
        try:
            if not run_module(name):
                failed.append(name)
        except Exception as e:
            print(f"{Fore.RED}{name} crashed: {e!r}{Style.RESET_ALL}")
            failed.append(name)
        print()

    if failed:
        print(f"{Fore.RED}Failed modules: {', '.join(failed)}{Style.RESET_ALL}")
        return 1
    print(f"{Fore.GREEN}All Polydist test modules passed.{Style.RESET_ALL}")
    return 0


if __name__ == "__main__":
    sys.exit(discover_and_run_tests(sys.argv[1:]))
