"""
Visual motion smoothing: speed-calibrated centred echo.

Each output frame is the unweighted mean of the n input frames centred on
it; the sequence is padded at both ends by repeating the first and last
frame. The window size is derived from the requested world-space trail
length and the measured mean per-frame displacement, so the trail length
stays the same at every animation speed.
"""

import itertools
import math
import sys
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from molecule_render.frame_io import FIXED_POINT_SCALE

MAX_TRAIL_LENGTH = 4
MIN_DISPLACEMENT = 1e-12


class CalibrationError(ValueError):
    """Raised when a blur window cannot be derived from the measured displacement."""


class FrameSequenceError(ValueError):
    """Raised for empty or inconsistent frame sequences."""


@dataclass(frozen=True)
class TrailSpec:
    """Requested trail length in molecule bounding-sphere diameters (0 = no blur)."""
    trail_length: int = 0

    def __post_init__(self):
        if not 0 <= self.trail_length <= MAX_TRAIL_LENGTH:
            raise ValueError(f"Trail length must lie in 0..{MAX_TRAIL_LENGTH}, got {self.trail_length}")


@dataclass(frozen=True)
class EchoParams:
    """Echo window: n_window frames centred on the current frame."""
    n_window: int = 1

    def __post_init__(self):
        if self.n_window < 1 or self.n_window % 2 == 0:
            raise ValueError(f"Echo window must be a positive odd frame count, got {self.n_window}")

    @property
    def half(self) -> int:
        return (self.n_window - 1) // 2

    def shutter_seconds(self, frame_rate: float) -> float:
        """Time span covered by the window at the given frame rate."""
        return self.n_window / frame_rate


def nearest_odd(x: float) -> int:
    """Nearest odd integer >= 1; exact ties round up (20 -> 21)."""
    return max(1, 2 * int(math.floor((x - 1.0) / 2.0 + 0.5)) + 1)


def window_size(trail: TrailSpec, d_mol: float, d_bar: float, frame_rate: float) -> EchoParams:
    """
    Blur window for a world-space trail.

    Args:
        trail: Requested trail length
        d_mol: Molecule bounding-sphere diameter (scene units)
        d_bar: Mean per-frame displacement at `frame_rate` (scene units)
        frame_rate: Frame rate the displacement was measured at

    Returns:
        EchoParams with n_window = nearest odd integer to trail_length * d_mol / d_bar
    """
    if not math.isfinite(d_bar) or d_bar <= MIN_DISPLACEMENT:
        raise CalibrationError(f"Mean displacement must be positive to calibrate a trail, got {d_bar}")
    if frame_rate <= 0:
        raise CalibrationError(f"Frame rate must be positive, got {frame_rate}")
    if trail.trail_length == 0:
        return EchoParams(1)
    return EchoParams(nearest_odd(trail.trail_length * d_mol / d_bar))


def _check_frames(frames: Sequence[np.ndarray]) -> Tuple[int, ...]:
    if len(frames) == 0:
        raise FrameSequenceError("Echo needs at least one frame")
    shape = frames[0].shape
    for index, frame in enumerate(frames):
        if frame.shape != shape:
            raise FrameSequenceError(f"Frame {index} has shape {frame.shape}, expected {shape}")
    return shape


def echo(frames: Sequence[np.ndarray], params: EchoParams) -> List[np.ndarray]:
    """
    Windowed mean over an in-memory sequence.

    The mean is accumulated in float64 and stored back in the input dtype.

    Returns:
        Sequence of the same length as `frames`
    """
    _check_frames(frames)
    last = len(frames) - 1
    dtype = frames[0].dtype
    half = params.half
    output = []
    for t in range(len(frames)):
        window = [frames[min(max(j, 0), last)] for j in range(t - half, t + half + 1)]
        output.append(np.mean(np.stack(window), axis=0, dtype=np.float64).astype(dtype))
    return output


def to_fixed_point(frame: np.ndarray) -> np.ndarray:
    """Linear frame in [0, 1] -> integer frame on the 2^-24 grid."""
    return np.rint(np.asarray(frame, dtype=np.float64) * FIXED_POINT_SCALE).astype(np.uint32)


class StreamingEcho:
    """
    Echo over a frame source that is too long to hold in memory.

    Frames are pulled from `source(index)` (which must be pure) and summed
    exactly as integers on the frames' fixed-point grid; for quantized
    input the output is bit-identical to `echo` over the full sequence.
    Small windows are kept in memory; for large windows the frame leaving
    the window is fetched from the source a second time.
    """

    def __init__(self, source: Callable[[int], np.ndarray], n_frames: int, params: EchoParams,
                 cache_frames: int = 32, threads: int = 1, progress: bool = False):
        if n_frames <= 0:
            raise FrameSequenceError("Echo needs at least one frame")
        self.source = source
        self.n_frames = n_frames
        self.params = params
        self.cache_frames = cache_frames
        self.threads = max(1, threads)
        self.batch_size = 2 * self.threads
        self.progress = progress

    def _clamp(self, index: int) -> int:
        return min(max(index, 0), self.n_frames - 1)

    def _stream(self, indices: Iterable[int], executor: Optional[ThreadPoolExecutor]) -> Iterator[np.ndarray]:
        """Fixed-point frames for a non-decreasing index sequence, each distinct index fetched once."""
        fetch = lambda index: to_fixed_point(self.source(index))
        runs = [(index, len(list(group))) for index, group in itertools.groupby(indices)]
        for start in range(0, len(runs), self.batch_size):
            chunk = runs[start:start + self.batch_size]
            targets = [index for index, _ in chunk]
            frames = list(executor.map(fetch, targets) if executor else map(fetch, targets))
            for (_, count), frame in zip(chunk, frames):
                for _ in range(count):
                    yield frame

    def outputs(self, keep: Iterable[int]) -> Iterator[Tuple[int, np.ndarray]]:
        """
        Yield (index, blurred frame) for every index in `keep`, in increasing order.
        """
        keep = sorted(set(keep))
        if not keep:
            return
        if keep[0] < 0 or keep[-1] >= self.n_frames:
            raise FrameSequenceError(f"Requested frames outside 0..{self.n_frames - 1}")

        n, half, end = self.params.n_window, self.params.half, keep[-1]
        wanted = set(keep)
        cached = n <= self.cache_frames
        executor = ThreadPoolExecutor(max_workers=self.threads) if self.threads > 1 else None
        try:
            window = deque(self._stream((self._clamp(j) for j in range(-half, half + 1)), executor))
            total = np.zeros(window[0].shape, dtype=np.int64)
            for frame in window:
                total += frame
            if not cached:
                window.clear()

            entering = self._stream((self._clamp(t + 1 + half) for t in range(end)), executor)
            leaving = None if cached else self._stream((self._clamp(t - half) for t in range(end)), executor)

            steps = tqdm(range(end + 1), desc="Echo", unit="frame", file=sys.stderr, disable=not self.progress)
            for t in steps:
                if t in wanted:
                    mean = total.astype(np.float64) / n / FIXED_POINT_SCALE
                    yield t, mean.astype(np.float32)
                if t == end:
                    break
                incoming = next(entering)
                if cached:
                    window.append(incoming)
                    outgoing = window.popleft()
                else:
                    outgoing = next(leaving)
                total += incoming
                total -= outgoing
        finally:
            if executor:
                executor.shutdown(wait=True)
