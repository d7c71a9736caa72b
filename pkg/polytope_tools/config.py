"""
Configuration module for Polydist

Budget caps shared by the library and the command line. Library functions take
an optional Budget; when none is given, DEFAULT_BUDGET applies.
"""

import os
import tempfile
from dataclasses import dataclass, replace
from typing import Any, Optional

# Largest C(m, d) the exhaustive basis scan will attempt
DEFAULT_MAX_BASES = 5_000_000

# Largest number of edge relaxations an all-pairs BFS may perform
DEFAULT_MAX_RELAXATIONS = 10_000_000

# Up to this many candidate subsets, method="auto" scans; above it, it walks
DEFAULT_SCAN_LIMIT = 2_000

DEFAULT_JOBS = 1

# 2^d subset scan limit for the brute-force partition oracle
DEFAULT_PARTITION_BITS = 30

# Candidate y_k values tried per row while layering a rock extension
DEFAULT_LAYER_SEARCH_DEPTH = 12

DEFAULT_LOG_FILE = os.path.join(tempfile.gettempdir(), "polydist_logs", "polydist.log")


@dataclass(frozen=True)
class Budget:
    """Size limits for enumeration, graph search and oracles"""

    max_bases: int = DEFAULT_MAX_BASES
    max_relaxations: int = DEFAULT_MAX_RELAXATIONS
    scan_limit: int = DEFAULT_SCAN_LIMIT
    jobs: int = DEFAULT_JOBS
    partition_bits: int = DEFAULT_PARTITION_BITS
    layer_search_depth: int = DEFAULT_LAYER_SEARCH_DEPTH

    def with_overrides(self, **overrides: Any) -> "Budget":
        """
        Return a copy with every non-None override applied

        Args:
            **overrides: Field values, typically straight from argparse

        Returns:
            A new Budget
        """
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {
            "max_bases": self.max_bases,
            "max_relaxations": self.max_relaxations,
            "scan_limit": self.scan_limit,
            "jobs": self.jobs,
            "partition_bits": self.partition_bits,
            "layer_search_depth": self.layer_search_depth,
        }


DEFAULT_BUDGET = Budget()


def resolve_budget(budget: Optional[Budget]) -> Budget:
    return budget if budget is not None else DEFAULT_BUDGET
