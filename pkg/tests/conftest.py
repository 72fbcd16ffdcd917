"""Shared fixtures: a tiny stimulus configuration that renders in well under a second."""

from pathlib import Path

import pytest
import yaml

from study_harness.settings import config_from_dict


def small_config_dict():
    return {
        "scene": {"n_molecules": 40},
        "motion": {
            "reaction": {"start_window": [0.5, 1.0], "d_attract": 1.0, "d_bond": 0.5, "d_repulse": 1.0},
        },
        "render": {"width": 64, "height": 36},
        "smoothing": {"frame_rate": 12, "decimation": 4, "calibration_molecules": 20, "calibration_frames": 48},
        "harness": {"duration": 4.0},
    }


@pytest.fixture
def small_config():
    return config_from_dict(small_config_dict())


@pytest.fixture
def small_config_path(tmp_path) -> Path:
    path = tmp_path / "small.yaml"
    path.write_text(yaml.safe_dump(small_config_dict()), encoding="utf-8")
    return path
