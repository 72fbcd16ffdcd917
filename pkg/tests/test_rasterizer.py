import numpy as np
import pytest

from brownian_motion.motion import SceneBox
from molecule_render.frame_io import FIXED_POINT_SCALE
from molecule_render.rasterizer import (
    Camera,
    RenderLayer,
    blank_frame,
    rasterize_spheres,
    render_frame,
)
from molecule_render.scene import SceneConfig, build_scene

BLACK = (0.0, 0.0, 0.0)


@pytest.fixture
def camera():
    return Camera(width=64, height=36, background=BLACK)


def test_camera_maps_box_onto_viewport():
    camera = Camera()
    assert camera.scale == 64.0
    corners = camera.project(np.array([[0.0, 0.0, 0.0], [16.0, 9.0, 4.0]]))
    assert np.allclose(corners, [[0.0, 576.0], [1024.0, 0.0]])


def test_empty_scene_is_background(camera):
    frame = rasterize_spheres(camera, np.zeros((0, 3)), np.zeros(0), np.zeros((0, 3)), (0.25, 0.5, 0.75))
    assert frame.shape == (36, 64, 3)
    assert frame.dtype == np.float32
    assert np.all(frame == frame[0, 0])
    assert np.allclose(frame[0, 0], (0.25, 0.5, 0.75), atol=1e-7)


def test_single_sphere_covers_projected_disc(camera):
    # scale 4 px/unit, radius 2 units -> 8 px around pixel (32, 18)
    frame = rasterize_spheres(camera, np.array([[8.0, 4.5, 2.0]]), np.array([2.0]), np.array([[1.0, 1.0, 1.0]]),
                              BLACK)
    lit = frame[..., 0] > 0
    ys, xs = np.mgrid[0:36, 0:64]
    distance = np.hypot(xs + 0.5 - 32.0, ys + 0.5 - 18.0)
    assert np.all(lit[distance <= 7.0])
    assert not np.any(lit[distance > 9.0])


def test_nearest_sphere_wins_regardless_of_order(camera):
    centers = np.array([[8.0, 4.5, 1.0], [8.0, 4.5, 3.0]])
    radii = np.array([1.0, 0.5])
    colors = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    frame = rasterize_spheres(camera, centers, radii, colors, BLACK)
    swapped = rasterize_spheres(camera, centers[::-1], radii[::-1], colors[::-1], BLACK)
    assert np.array_equal(frame, swapped)
    centre = frame[18, 32]
    assert centre[2] > 0 and centre[0] == 0


def test_frames_are_on_fixed_point_grid(camera):
    rng = np.random.default_rng(0)
    frame = rasterize_spheres(camera, rng.uniform(0, 9, size=(50, 3)), rng.uniform(0.2, 1.0, size=50),
                              rng.uniform(0, 1, size=(50, 3)), (0.004, 0.004, 0.006))
    scaled = frame.astype(np.float64) * FIXED_POINT_SCALE
    assert np.array_equal(scaled, np.round(scaled))


def test_unshaded_spheres_keep_flat_colour(camera):
    frame = rasterize_spheres(camera, np.array([[8.0, 4.5, 2.0]]), np.array([2.0]), np.array([[0.5, 0.5, 0.5]]),
                              BLACK, shaded=np.array([False]))
    values = np.unique(frame[..., 0])
    assert set(values.tolist()) == {0.0, 0.5}


def test_layers():
    box = SceneBox()
    camera = Camera(width=128, height=72, box=box)
    population = build_scene(SceneConfig(n_molecules=60), seed=2)
    positions = np.random.default_rng(1).uniform(0, 1, size=(60, 3)) * np.asarray(box.size)
    focus = population.focus_pair
    # focus molecules in front of everything, far apart
    positions[focus[0]] = (4.0, 4.5, 4.5)
    positions[focus[1]] = (12.0, 4.5, 4.5)

    focus_layer = render_frame(population, positions, RenderLayer.FOCUS_ONLY, camera)
    context_layer = render_frame(population, positions, RenderLayer.CONTEXT_WITH_FOCUS_MASK, camera)
    full = render_frame(population, positions, RenderLayer.FULL, camera)

    focus_pixels = focus_layer.max(axis=2) > 0
    assert focus_pixels.any()
    # the focus layer is black outside the focus molecules, the context layer black on them
    assert np.all(context_layer[focus_pixels] == 0)
    assert np.array_equal(full[~focus_pixels], context_layer[~focus_pixels])
    assert np.array_equal(full[focus_pixels], focus_layer[focus_pixels])


def test_render_is_deterministic():
    population = build_scene(SceneConfig(n_molecules=30), seed=4)
    positions = np.random.default_rng(3).uniform(0, 1, size=(30, 3)) * np.asarray(SceneBox().size)
    camera = Camera(width=96, height=54)
    first = render_frame(population, positions, RenderLayer.FULL, camera)
    assert np.array_equal(first, render_frame(population, positions, RenderLayer.FULL, camera))


def test_empty_focus_set_renders_black_focus_layer():
    population = build_scene(SceneConfig(n_molecules=10), seed=4)
    camera = Camera(width=32, height=18)
    positions = np.full((10, 3), 2.0)
    assert np.array_equal(render_frame(population, positions, RenderLayer.FOCUS_ONLY, camera, focus_ids=()),
                          blank_frame(camera))


def test_wrong_position_shape_rejected():
    population = build_scene(SceneConfig(n_molecules=10), seed=4)
    with pytest.raises(ValueError):
        render_frame(population, np.zeros((9, 3)), RenderLayer.FULL, Camera(width=32, height=18))
