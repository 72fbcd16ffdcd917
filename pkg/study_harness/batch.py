"""
Batch generation of the full condition matrix.
"""

import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .conditions import StimulusCondition, condition_matrix
from .manifest import INDEX_NAME, write_manifest
from .processor import StimulusProcessor
from .settings import StimulusConfig


def stimulus_directory(position: int, condition: StimulusCondition) -> str:
    """Directory name of the position-th stimulus, e.g. cond03_gms-on_trail2_speed4."""
    return f"cond{position:02d}_{condition.label}"


def run_batch(config: StimulusConfig, out_root: Path, seed: int, dry_run: bool = False,
              threads: int = 1, progress: bool = True,
              conditions: Optional[List[StimulusCondition]] = None,
              export_layers: bool = False) -> Dict[str, Any]:
    """
    Generate every stimulus of a trial list and write the index manifest.

    Args:
        config: Stimulus configuration
        out_root: Directory receiving one sub-directory per stimulus and index.json
        seed: Batch seed (drives the condition matrix)
        dry_run: Only write index.json, render nothing
        threads: Render threads per stimulus
        conditions: Explicit trial list (default: the seeded condition matrix)

    Returns:
        The index manifest
    """
    if conditions is None:
        conditions = condition_matrix(seed, config)
    processor = StimulusProcessor(config, threads=threads, progress=progress)
    out_root.mkdir(parents=True, exist_ok=True)

    stimuli = []
    for position, condition in enumerate(conditions):
        directory = stimulus_directory(position, condition)
        if dry_run:
            manifest = processor.describe(condition)
        else:
            manifest = processor.process_condition(condition, out_root / directory, export_layers=export_layers)
        stimuli.append({
            "directory": directory,
            "label": manifest["label"],
            "condition": manifest["condition"],
            "motion": manifest["motion"],
            "reactants": manifest["reactants"],
            "phases": manifest["phases"],
            "calibration": manifest["calibration"],
        })

    index = {
        "seed": str(seed),
        "dry_run": dry_run,
        "config": config.to_dict(),
        "frames_per_stimulus": len(range(0, config.n_frames, config.smoothing.decimation)),
        "stimuli": stimuli,
    }
    write_manifest(index, out_root / INDEX_NAME)
    if progress:
        print(f"  > Index of {len(stimuli)} stimuli saved: {out_root / INDEX_NAME}", file=sys.stderr)
    return index
