"""
Shared fixtures for the Polydist tests

Small polytopes with known graphs, plus the runner used by every test file's
main().
"""

import traceback
from fractions import Fraction
from typing import Callable, List

from colorama import Fore, Style, init

from polytope_tools.knapsack_reduction import PartitionInstance, build_Pb
from polytope_tools.polytope_core import HPolytope, unit_cube

# Initialize colorama
init(autoreset=True)

HALF = Fraction(1, 2)


def square() -> HPolytope:
    return unit_cube(2)


def cube() -> HPolytope:
    return unit_cube(3)


def cube_with_redundant_row() -> HPolytope:
    """The unit cube plus x_1 <= 2"""
    return cube().add_row((1, 0, 0), 2, "slack")


def square_pyramid() -> HPolytope:
    """Base [0,1]^2 at z = 0, apex (1/2, 1/2, 1) on all four side facets"""
    return HPolytope.from_rows([
        ("floor", (0, 0, -1), 0),
        ("west", (-2, 0, 1), 0),
        ("east", (2, 0, 1), 2),
        ("south", (0, -2, 1), 0),
        ("north", (0, 2, 1), 2),
    ])


def pb(*weights: int) -> HPolytope:
    return build_Pb(PartitionInstance(tuple(weights)))


def origin_basis(d: int) -> List[str]:
    return [f"lo:{i}" for i in range(1, d + 1)]


def top_basis(d: int) -> List[str]:
    return [f"hi:{i}" for i in range(1, d + 1)]


def run_test_functions(title: str, tests: List[Callable[[], None]]) -> int:
    """
    Run test functions one by one with coloured status lines

    Args:
        title: Printed before the first test
        tests: Functions that raise on failure

    Returns:
        0 if every test passed, 1 otherwise
    """
    print(f"{Fore.CYAN}Running {title}...{Style.RESET_ALL}")
    success = True
    for test in tests:
        print(f"\n{Fore.CYAN}Testing {test.__name__}...{Style.RESET_ALL}")
        try:
            test()
            print(f"{Fore.GREEN}Success{Style.RESET_ALL}")
        except Exception as e:
            print(f"{Fore.RED}Error: {e!r}{Style.RESET_ALL}")
            traceback.print_exc()
            success = False

    if success:
        print(f"\n{Fore.GREEN}All tests passed successfully!{Style.RESET_ALL}")
        return 0
    print(f"\n{Fore.RED}Some tests failed.{Style.RESET_ALL}")
    return 1
