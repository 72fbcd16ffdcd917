import numpy as np
import pytest

from molecule_render.frame_io import (
    encode_srgb8,
    frame_hash,
    frame_path,
    list_frames,
    quantize,
    read_frame,
    write_frame,
)
from motion_smoothing.compositing import composite_directories, decimate, decimation_indices, screen_blend
from motion_smoothing.echo import EchoParams, FrameSequenceError


@pytest.fixture
def pixels():
    rng = np.random.default_rng(7)
    return rng.uniform(0, 1, size=(3, 100_000)).astype(np.float32)


def test_screen_blend_laws(pixels):
    a, b, c = pixels
    black, white = np.zeros_like(a), np.ones_like(a)
    assert np.array_equal(screen_blend(a, b), screen_blend(b, a))
    assert np.array_equal(screen_blend(a, black), a)
    assert np.array_equal(screen_blend(a, white), white)
    blended = screen_blend(a, b)
    assert np.all(blended >= np.maximum(a, b))
    assert np.all(blended <= 1)
    assert np.allclose(screen_blend(screen_blend(a, b), c), screen_blend(a, screen_blend(b, c)), atol=1e-6)
    assert np.allclose(blended, 1 - (1 - a) * (1 - b), atol=1e-6)


def test_screen_blend_shape_mismatch():
    with pytest.raises(FrameSequenceError):
        screen_blend(np.zeros((2, 2, 3)), np.zeros((2, 3, 3)))


def test_decimation_keeps_every_fourth_frame():
    frames = list(range(2400))
    kept = decimate(frames)
    assert len(kept) == 600
    assert kept[:3] == [0, 4, 8] and kept[-1] == 2396
    assert len(decimate(list(range(10)), 4)) == 3
    assert decimate(frames, 1) == frames
    with pytest.raises(ValueError):
        decimation_indices(10, 0)


def test_composite_directories(tmp_path):
    rng = np.random.default_rng(3)
    context_dir, focus_dir, out_dir = tmp_path / "context", tmp_path / "focus", tmp_path / "out"
    for index in range(8):
        write_frame(rng.uniform(0, 1, size=(9, 16, 3)).astype(np.float32), frame_path(context_dir, index))
        focus = np.zeros((9, 16, 3), dtype=np.float32)
        focus[2:5, 3:7] = rng.uniform(0, 1, size=3)
        write_frame(focus, frame_path(focus_dir, index))

    summary = composite_directories(context_dir, focus_dir, out_dir, EchoParams(1), factor=2, progress=False)
    assert summary["frames"] == 4
    assert len(list_frames(out_dir)) == 4

    contexts, focuses = list_frames(context_dir), list_frames(focus_dir)
    expected = [frame_hash(encode_srgb8(screen_blend(quantize(read_frame(contexts[i])), read_frame(focuses[i]))))
                for i in (0, 2, 4, 6)]
    assert summary["frame_hashes"] == expected


def test_composite_directories_rejects_uneven_layers(tmp_path):
    for index in range(3):
        write_frame(np.zeros((2, 2, 3), dtype=np.float32), frame_path(tmp_path / "context", index))
    write_frame(np.zeros((2, 2, 3), dtype=np.float32), frame_path(tmp_path / "focus", 0))
    with pytest.raises(FrameSequenceError):
        composite_directories(tmp_path / "context", tmp_path / "focus", tmp_path / "out", EchoParams(3),
                              progress=False)
