"""
Shared helpers for the study harness: standard CLI responses and JSON files.
"""

import json
from pathlib import Path
from typing import Any, Dict


def create_standard_error_response(error_msg: str, **additional_fields) -> Dict[str, Any]:
    """
    Create standardized error response dictionary.

    Args:
        error_msg: Error message
        **additional_fields: Additional fields to include in response

    Returns:
        Standardized error response dictionary
    """
    return {
        "success": False,
        "error": error_msg,
        **additional_fields
    }


def create_standard_success_response(data: Dict[str, Any], **additional_fields) -> Dict[str, Any]:
    """Create standardized success response dictionary."""
    return {
        "success": True,
        **data,
        **additional_fields
    }


def write_json(data: Dict[str, Any], path: Path) -> Path:
    """Write `data` as indented, key-sorted JSON (stable across runs)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise IOError(f"Failed to write {path}: {e}")
    return path


def load_json(path: Path) -> Dict[str, Any]:
    """
    Load a JSON document.

    Raises:
        FileNotFoundError: If the file doesn't exist
        ValueError: If the file is not valid JSON
    """
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValueError(f"Invalid JSON in {path}: {e}")
