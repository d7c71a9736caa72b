"""
Run manifest module for Polydist

This module records what a CLI run did: the command, a digest of its inputs,
the seed, the budget caps, the outputs it produced and how long it took. Two
runs with the same command, input digest, seed and budget produce the same
outputs.
"""

import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from polytope_tools.config import Budget


def digest_inputs(arguments: Dict[str, Any], files: List[str]) -> str:
    """
    sha256 over the canonical JSON of the arguments and the bytes of every input file

    Args:
        arguments: The parsed command-line arguments that influence results
        files: Input file paths ("-" and missing files are skipped)

    Returns:
        Hex digest
    """
    sha = hashlib.sha256()
    sha.update(json.dumps(arguments, sort_keys=True, default=str).encode())
    for file_path in files:
        if not file_path or file_path == "-" or not os.path.isfile(file_path):
            continue
        with open(file_path, "rb") as f:
            sha.update(f.read())
    return sha.hexdigest()


@dataclass
class RunManifest:
    command: str
    input_digest: str
    seed: Optional[int]
    budget: Dict[str, int]
    outputs: Dict[str, Any] = field(default_factory=dict)
    started: float = field(default_factory=time.time)
    elapsed_seconds: Optional[float] = None

    @classmethod
    def start(cls, command: str, arguments: Dict[str, Any], files: List[str], seed: Optional[int],
              budget: Budget) -> "RunManifest":
        return cls(command, digest_inputs(arguments, files), seed, budget.as_dict())

    def record(self, **outputs: Any):
        self.outputs.update(outputs)

    def finish(self):
        self.elapsed_seconds = round(time.time() - self.started, 3)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["started"] = time.strftime("%Y-%m-%d %H:%M:%S", time.localtime(self.started))
        return data


def save_manifest(manifest: RunManifest, file_path: str) -> bool:
    """
    Save the manifest to a JSON file

    Args:
        manifest: The finished manifest
        file_path: Where to write it

    Returns:
        True if successful, False otherwise
    """
    try:
        os.makedirs(os.path.dirname(os.path.abspath(file_path)), exist_ok=True)
        with open(file_path, "w") as f:
            json.dump(manifest.to_dict(), f, indent=2, sort_keys=True, default=str)
        return True
    except OSError as e:
        print(f"Error saving manifest: {e}", file=sys.stderr)
        return False
