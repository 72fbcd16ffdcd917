"""
Stimulus and batch manifests.

A stimulus manifest records everything needed to regenerate its frames:
the full configuration, the condition with its reaction script and seed,
the calibrated blur window and the hash of every output frame.
"""

import json
from pathlib import Path
from typing import Any, Dict, List

from .conditions import StimulusCondition
from .settings import StimulusConfig, config_from_dict
from .utils import load_json, write_json

MANIFEST_SCHEMA_VERSION = 1
MANIFEST_NAME = "manifest.json"
INDEX_NAME = "index.json"


def write_manifest(manifest: Dict[str, Any], path: Path) -> Path:
    """Write a manifest, stamping the schema version."""
    return write_json({"schema_version": MANIFEST_SCHEMA_VERSION, **manifest}, path)


def load_manifest(path: Path) -> Dict[str, Any]:
    """Load a manifest written by `write_manifest`, checking its schema version."""
    manifest = load_json(path)
    version = manifest.get("schema_version")
    if version != MANIFEST_SCHEMA_VERSION:
        raise ValueError(f"Unsupported manifest schema version {version} in {path}, "
                         f"expected {MANIFEST_SCHEMA_VERSION}")
    return manifest


def manifest_inputs(manifest: Dict[str, Any]):
    """(config, condition) a stimulus manifest was generated from."""
    if "config" not in manifest or "condition" not in manifest:
        raise ValueError("Manifest has no config/condition record, it cannot be regenerated")
    config: StimulusConfig = config_from_dict(manifest["config"])
    condition = StimulusCondition.from_dict(manifest["condition"])
    return config, condition


def verify_manifest(expected: Dict[str, Any], actual: Dict[str, Any]) -> List[str]:
    """
    Compare a regenerated stimulus against its original manifest.

    Returns:
        Human-readable list of differences (empty when the stimulus reproduces)
    """
    # compare in stored form (tuples become lists, keys become strings)
    expected, actual = json.loads(json.dumps(expected)), json.loads(json.dumps(actual))
    problems = []
    for key in ("label", "calibration", "reactants", "phases"):
        if expected.get(key) != actual.get(key):
            problems.append(f"{key} differs: {expected.get(key)!r} != {actual.get(key)!r}")

    old, new = expected.get("frame_hashes", []), actual.get("frame_hashes", [])
    if len(old) != len(new):
        problems.append(f"frame count differs: {len(old)} != {len(new)}")
    mismatched = [i for i, (a, b) in enumerate(zip(old, new)) if a != b]
    if mismatched:
        problems.append(f"{len(mismatched)} frame hashes differ, first at frame {mismatched[0]}")
    return problems
