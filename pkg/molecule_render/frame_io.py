"""
Frame export and import.

Frames are kept in linear light while they are rendered, blurred and
composited; sRGB 8-bit encoding happens only when a frame leaves the
pipeline.
"""

import hashlib
import math
import sys
from pathlib import Path
from typing import List

import numpy as np
from PIL import Image

FRAME_PATTERN = "frame_{:06d}.{}"
FORMATS = {"png": "PNG", "ppm": "PPM"}

# linear frames are multiples of 2^-24, so temporal sums are exact in integers
FIXED_POINT_BITS = 24
FIXED_POINT_SCALE = float(1 << FIXED_POINT_BITS)


def quantize(frame: np.ndarray) -> np.ndarray:
    """Round linear values onto the 2^-24 fixed-point grid, as float32."""
    return (np.round(np.clip(frame, 0.0, 1.0) * FIXED_POINT_SCALE) / FIXED_POINT_SCALE).astype(np.float32)


def srgb_to_linear(values: np.ndarray) -> np.ndarray:
    """sRGB transfer function inverse, values in [0, 1]."""
    values = np.asarray(values, dtype=np.float64)
    return np.where(values <= 0.04045, values / 12.92, ((values + 0.055) / 1.055) ** 2.4)


def linear_to_srgb(values: np.ndarray) -> np.ndarray:
    """sRGB transfer function, values in [0, 1]."""
    values = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    return np.where(values <= 0.0031308, values * 12.92, 1.055 * values ** (1.0 / 2.4) - 0.055)


def _srgb_code_bounds() -> np.ndarray:
    """Linear value at which each 8-bit sRGB code starts (codes 1..255)."""
    bounds = []
    for code in range(255):
        s = (code + 0.5) / 255.0
        bounds.append(s / 12.92 if s <= 0.04045 else math.pow((s + 0.055) / 1.055, 2.4))
    return np.array(bounds, dtype=np.float64)


_SRGB_BOUNDS = _srgb_code_bounds()


def encode_srgb8(frame: np.ndarray) -> np.ndarray:
    """Linear float frame -> sRGB uint8 frame (round to nearest code)."""
    return np.searchsorted(_SRGB_BOUNDS, np.asarray(frame, dtype=np.float64), side="right").astype(np.uint8)


def decode_srgb8(pixels: np.ndarray) -> np.ndarray:
    """sRGB uint8 frame -> linear float32 frame."""
    return srgb_to_linear(np.asarray(pixels, dtype=np.float64) / 255.0).astype(np.float32)


def frame_hash(encoded: np.ndarray) -> str:
    """SHA-256 over the frame shape and its 8-bit pixel bytes."""
    digest = hashlib.sha256()
    digest.update(repr(encoded.shape).encode('ascii'))
    digest.update(np.ascontiguousarray(encoded, dtype=np.uint8).tobytes())
    return digest.hexdigest()


def frame_path(directory: Path, index: int, image_format: str = "png") -> Path:
    """Numbered frame file inside `directory`."""
    if image_format not in FORMATS:
        raise ValueError(f"Unsupported frame format '{image_format}', expected one of {sorted(FORMATS)}")
    return directory / FRAME_PATTERN.format(index, image_format)


def write_frame(frame: np.ndarray, path: Path) -> str:
    """
    Encode a linear frame to 8-bit sRGB and save it (PNG or binary PPM by suffix).

    Returns:
        Hash of the encoded pixels
    """
    encoded = encode_srgb8(frame)
    image_format = FORMATS.get(path.suffix.lstrip('.').lower())
    if image_format is None:
        raise ValueError(f"Unsupported frame file type: {path}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(np.ascontiguousarray(encoded)).save(path, format=image_format)
    except OSError as e:
        raise IOError(f"Failed to write frame {path}: {e}")
    return frame_hash(encoded)


def read_frame(path: Path) -> np.ndarray:
    """Load a PNG/PPM frame as a linear float32 array."""
    if not path.exists():
        raise FileNotFoundError(f"Frame file not found: {path}")
    try:
        with Image.open(path) as image:
            return decode_srgb8(np.asarray(image.convert("RGB")))
    except OSError as e:
        raise IOError(f"Failed to read frame {path}: {e}")


def list_frames(directory: Path) -> List[Path]:
    """Numbered frame files of a directory, in frame order."""
    if not directory.is_dir():
        raise FileNotFoundError(f"Frame directory not found: {directory}")
    frames = sorted(p for p in directory.glob("frame_*.*") if p.suffix.lstrip('.').lower() in FORMATS)
    if not frames:
        print(f"    > WARNING: No frames found in {directory}", file=sys.stderr)
    return frames
