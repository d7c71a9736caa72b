"""
Utility functions for Polydist

This module provides helper functions for the command line, including
colorized status lines on stderr, logging setup, and the rich table used by
the verification report.
"""

import logging
import os
import sys
from typing import Any, Dict, List, Optional

from colorama import Fore, Style, init
from rich.console import Console
from rich.table import Table

from polytope_tools.config import DEFAULT_LOG_FILE

# Initialize colorama for cross-platform color support
init(autoreset=True)

# Terminal color constants for consistent UI
INFO_COLOR = Fore.CYAN
SUCCESS_COLOR = Fore.GREEN
ERROR_COLOR = Fore.RED
WARNING_COLOR = Fore.YELLOW

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

# stdout carries JSON, so everything for humans goes to stderr
console = Console(stderr=True)


def print_info(message: str):
    """Print a progress message"""
    print(f"{INFO_COLOR}{message}{Style.RESET_ALL}", file=sys.stderr)


def print_error(message: str):
    """Print an error message"""
    print(f"{ERROR_COLOR}Error: {message}{Style.RESET_ALL}", file=sys.stderr)


def print_warning(message: str):
    """Print a warning message"""
    print(f"{WARNING_COLOR}Warning: {message}{Style.RESET_ALL}", file=sys.stderr)


def print_success(message: str):
    """Print a success message"""
    print(f"{SUCCESS_COLOR}Success: {message}{Style.RESET_ALL}", file=sys.stderr)


def setup_logging(log_file: Optional[str] = None, verbose: bool = False) -> str:
    """
    Configure the root logger once for a CLI run

    Args:
        log_file: Where to write the log (defaults to a file under the temp directory)
        verbose: Log at DEBUG and mirror records to stderr

    Returns:
        The path of the log file
    """
    file_path = log_file or DEFAULT_LOG_FILE
    os.makedirs(os.path.dirname(os.path.abspath(file_path)), exist_ok=True)
    handlers: List[logging.Handler] = [logging.FileHandler(file_path)]
    if verbose:
        handlers.append(logging.StreamHandler(sys.stderr))
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
    return file_path


def render_claims_table(rows: List[Dict[str, Any]], title: str = "Verification report"):
    """Print the per-claim verification rows as a table"""
    table = Table(title=title)
    table.add_column("Claim", style="cyan")
    table.add_column("Instance")
    table.add_column("Expected")
    table.add_column("Got")
    table.add_column("Verdict")
    for row in rows:
        verdict = "[green]pass[/green]" if row["verdict"] == "pass" else "[red]FAIL[/red]"
        table.add_row(row["claim"], row["instance"], str(row["expected"]), str(row["got"]), verdict)
    console.print(table)
