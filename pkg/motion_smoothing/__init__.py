"""
Motion Smoothing Module

Visual motion smoothing for the context layer and the final compositing steps.

Key Features:
- Trail-length calibration: blur window from world-space trail and measured speed
- Centred echo (unweighted windowed mean with edge padding), in memory or streamed
- Screen-blend compositing of the blurred context layer with the focus layer
- 120 -> 30 fps decimation and an offline mode over frame directories

Usage:
    from motion_smoothing import TrailSpec, window_size, echo, screen_blend, decimate

    params = window_size(TrailSpec(2), d_mol, d_bar, frame_rate=120)
    blurred = echo(context_frames, params)
"""

from .echo import (
    CalibrationError,
    EchoParams,
    FrameSequenceError,
    StreamingEcho,
    TrailSpec,
    echo,
    nearest_odd,
    to_fixed_point,
    window_size,
)
from .compositing import DECIMATION_FACTOR, composite_directories, decimate, decimation_indices, screen_blend

__all__ = [
    'CalibrationError', 'EchoParams', 'FrameSequenceError', 'StreamingEcho', 'TrailSpec',
    'echo', 'nearest_odd', 'to_fixed_point', 'window_size',
    'DECIMATION_FACTOR', 'composite_directories', 'decimate', 'decimation_indices', 'screen_blend',
]
