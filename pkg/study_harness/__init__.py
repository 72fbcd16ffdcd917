"""
Study Harness Module

Orchestrates stimulus generation for the motion-smoothing study.

Key Features:
- 2 GMS x 5 trail-length condition matrix with seeded order, speed levels and reactions
- Per-stimulus blur calibration, rendering, compositing and 30 fps output
- Versioned JSON manifests that regenerate a stimulus bit-identically
- Perceived-speed regression models and speed compensation
- Command-line interface (python -m study_harness)

Usage:
    from study_harness import load_stimulus_config, condition_matrix, generate_stimulus

    config = load_stimulus_config(Path("study_harness/config.yaml"))
    for condition in condition_matrix(seed=7, config=config):
        generate_stimulus(condition, Path("out") / condition.label, config)
"""

from .settings import StimulusConfig, config_from_dict, load_stimulus_config
from .conditions import (
    PRESETS,
    StimulusCondition,
    condition_matrix,
    derive_seed,
    make_condition,
    preset_conditions,
)
from .speed_models import (
    SPEED_MODELS,
    SpeedModel,
    SpeedRangeError,
    compensate_speed,
    compensated_speed,
    estimated_speed,
    speed_for_percent,
    speed_percent,
)
from .manifest import load_manifest, verify_manifest, write_manifest
from .processor import StimulusProcessor, generate_stimulus
from .batch import run_batch

__all__ = [
    'StimulusConfig', 'config_from_dict', 'load_stimulus_config',
    'PRESETS', 'StimulusCondition', 'condition_matrix', 'derive_seed', 'make_condition', 'preset_conditions',
    'SPEED_MODELS', 'SpeedModel', 'SpeedRangeError', 'compensate_speed', 'compensated_speed',
    'estimated_speed', 'speed_for_percent', 'speed_percent',
    'load_manifest', 'verify_manifest', 'write_manifest',
    'StimulusProcessor', 'generate_stimulus', 'run_batch',
]
