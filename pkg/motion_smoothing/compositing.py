"""
Layer compositing and frame-rate decimation, in memory and over frame directories.
"""

import sys
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np
from tqdm import tqdm

from molecule_render.frame_io import frame_path, list_frames, quantize, read_frame, write_frame
from .echo import EchoParams, FrameSequenceError, StreamingEcho

DECIMATION_FACTOR = 4  # 120 fps -> 30 fps


def screen_blend(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Screen blend, 1 - (1 - a)(1 - b) per channel.

    Evaluated as hi + lo * (1 - hi) with hi = max(a, b), lo = min(a, b): the
    same value algebraically, but symmetric bit for bit, exact for black and
    white inputs and never below either input.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise FrameSequenceError(f"Cannot blend frames of shape {a.shape} and {b.shape}")
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    return np.clip(hi + lo * (1 - hi), 0, 1).astype(np.result_type(a, b))


def decimation_indices(n_frames: int, factor: int = DECIMATION_FACTOR) -> range:
    """Input frame indices kept by `decimate`."""
    if factor < 1:
        raise ValueError(f"Decimation factor must be at least 1, got {factor}")
    return range(0, n_frames, factor)


def decimate(frames: Sequence[np.ndarray], factor: int = DECIMATION_FACTOR) -> List[np.ndarray]:
    """Keep every `factor`-th frame starting at frame 0 (length ceil(len / factor))."""
    return [frames[i] for i in decimation_indices(len(frames), factor)]


def composite_directories(context_dir: Path, focus_dir: Path, output_dir: Path, params: EchoParams,
                          factor: int = DECIMATION_FACTOR, image_format: str = "png",
                          threads: int = 1, cache_frames: int = 32, progress: bool = True) -> Dict[str, object]:
    """
    Offline pipeline over two directories of numbered frames: echo the context
    frames, screen-blend with the focus frames and write the decimated result.

    Returns:
        Summary with the number of frames written and their hashes
    """
    context_frames = list_frames(context_dir)
    focus_frames = list_frames(focus_dir)
    if not context_frames:
        raise FrameSequenceError(f"No context frames in {context_dir}")
    if len(context_frames) != len(focus_frames):
        raise FrameSequenceError(
            f"Layer directories differ in length: {len(context_frames)} context vs {len(focus_frames)} focus frames")

    output_dir.mkdir(parents=True, exist_ok=True)
    print(f"  > Compositing {len(context_frames)} frames (window {params.n_window}, keep 1/{factor})...",
          file=sys.stderr)

    blurred = StreamingEcho(lambda i: quantize(read_frame(context_frames[i])), len(context_frames), params,
                            cache_frames=cache_frames, threads=threads)
    keep = decimation_indices(len(context_frames), factor)
    hashes = []
    for out_index, (index, context) in enumerate(tqdm(blurred.outputs(keep), total=len(keep), desc="Composite",
                                                      unit="frame", file=sys.stderr, disable=not progress)):
        frame = screen_blend(context, read_frame(focus_frames[index]))
        hashes.append(write_frame(frame, frame_path(output_dir, out_index, image_format)))

    print(f"    > {len(hashes)} composited frames saved in {output_dir}", file=sys.stderr)
    return {"frames": len(hashes), "n_window": params.n_window, "frame_hashes": hashes}
