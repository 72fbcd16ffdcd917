"""
Configuration management for the stimulus engine.
Centralizes run-level settings; the stimulus description itself lives in
study_harness/config.yaml.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Application configuration class."""

    # File Paths
    BASE_DIR = Path(__file__).parent
    HARNESS_DIR = BASE_DIR / 'study_harness'

    # Stimulus Configuration
    STIMULUS_SEED = int(os.getenv('STIMULUS_SEED', 20230101))
    STIMULUS_OUTPUT_DIR = Path(os.getenv('STIMULUS_OUTPUT_DIR', 'stimuli_output'))
    STIMULUS_CONFIG_PATH = Path(os.getenv('STIMULUS_CONFIG_PATH', str(HARNESS_DIR / 'config.yaml')))

    # Rendering Configuration
    RENDER_THREADS = int(os.getenv('RENDER_THREADS', os.cpu_count() or 1))
    ECHO_CACHE_FRAMES = int(os.getenv('ECHO_CACHE_FRAMES', 48))  # window frames kept in memory

    # Encoder template, e.g. "ffmpeg -y -framerate 30 -i {frames}/frame_%06d.png {output}"
    VIDEO_ENCODER_COMMAND = os.getenv('VIDEO_ENCODER_COMMAND', '')

    # Development Configuration
    DEBUG = os.getenv('DEBUG', 'false').lower() == 'true'

    @classmethod
    def get_stimulus_config_path(cls) -> Path:
        """Get the default stimulus config file path."""
        return cls.STIMULUS_CONFIG_PATH

    @classmethod
    def get_output_dir(cls) -> Path:
        """Get the stimulus output directory path."""
        return cls.STIMULUS_OUTPUT_DIR

    @classmethod
    def validate_config(cls):
        """Validate configuration values."""
        errors = []

        if not cls.get_stimulus_config_path().exists():
            errors.append(f"Stimulus config does not exist: {cls.get_stimulus_config_path()}")

        if cls.RENDER_THREADS <= 0:
            errors.append("Render threads must be positive")

        if cls.ECHO_CACHE_FRAMES < 1:
            errors.append("Echo cache must hold at least one frame")

        if not 0 <= cls.STIMULUS_SEED < 2 ** 64:
            errors.append("Stimulus seed must fit in an unsigned 64-bit integer")

        if cls.VIDEO_ENCODER_COMMAND and '{frames}' not in cls.VIDEO_ENCODER_COMMAND:
            errors.append("Encoder command must contain a {frames} placeholder")

        if errors:
            raise ValueError(f"Configuration errors: {'; '.join(errors)}")

        return True


# Create global config instance
config = Config()

# Validate configuration on import
if __name__ != '__main__':
    config.validate_config()
