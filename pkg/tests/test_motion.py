import numpy as np
import pytest

from brownian_motion.motion import (
    MotionParams,
    ReactionContractError,
    ReactionScript,
    SceneBox,
    context_coordinates,
    context_position,
    context_positions,
    displacement_stats,
    focus_position,
    focus_positions,
    is_focus_time,
    molecule_positions,
    reaction_phase,
    seed_offset,
)
from brownian_motion.noise import NoiseField

SPEEDS = (0.05, 0.10, 0.15, 0.20)


@pytest.fixture
def noise():
    return NoiseField(seed=1234)


@pytest.fixture
def script():
    return ReactionScript(partner_a=3, partner_b=8, t_start=5.0, target=(8.0, 4.5, 2.0),
                          bond_offset=(0.22, 0.0, 0.0))


def test_smoothing_extremes_match_closed_forms(noise):
    rng = np.random.default_rng(0)
    for _ in range(2000):
        i, c = int(rng.integers(0, 1000)), int(rng.integers(0, 3))
        t, v = float(rng.uniform(0, 20)), float(rng.uniform(0.01, 1.0))
        base = float(seed_offset(i, c, MotionParams(v=v))) + t * v
        assert context_position(i, c, t, MotionParams(v=v, tau=1.0), noise) == noise.sample(base)
        assert context_position(i, c, t, MotionParams(v=v, tau=0.0), noise) == \
            noise.sample(base + noise.sample(base))


def test_vectorised_coordinates_match_scalar(noise):
    params = MotionParams(v=0.1, tau=0.5)
    ids = np.array([0, 5, 999])
    times = np.array([0.0, 1.25, 19.99])
    coords = context_coordinates(ids, times, params, noise)
    assert coords.shape == (3, 3, 3)
    for f, t in enumerate(times):
        for m, i in enumerate(ids):
            for c in range(3):
                assert coords[f, m, c] == context_position(int(i), c, float(t), params, noise)
    assert np.array_equal(context_coordinates(ids, 1.25, params, noise), coords[1])


def test_seed_offsets_separate_components_and_molecules():
    params = MotionParams(v=0.1)
    assert seed_offset(0, 0, params) == 104729
    assert seed_offset(2, 1, params) == 2 * 104729 + 2 * 97


@pytest.mark.parametrize("kwargs", [{"v": 0.0}, {"v": -1.0}, {"v": 0.1, "tau": 1.5}, {"v": 0.1, "tau": -0.1}])
def test_invalid_motion_params(kwargs):
    with pytest.raises(ValueError):
        MotionParams(**kwargs)


def test_intermediate_tau_accepted():
    assert MotionParams(v=0.1, tau=0.25).unsmoothed().tau == 0.0


def test_positions_stay_in_box(noise):
    box = SceneBox()
    params = MotionParams(v=0.2)
    for t in np.linspace(0, 20, 41):
        positions = context_positions(np.arange(200), float(t), params, noise, box)
        assert np.all(positions >= 0.0)
        assert np.all(positions <= np.asarray(box.size))


@pytest.mark.slow
@pytest.mark.parametrize("v", SPEEDS)
def test_geometric_smoothing_slows_molecules(noise, v):
    box = SceneBox()
    # 20 s of motion per molecule
    rough = displacement_stats(MotionParams(v=v, tau=0.0), 1000, 600, 30.0, noise, box)
    smooth = displacement_stats(MotionParams(v=v, tau=1.0), 1000, 600, 30.0, noise, box)
    assert smooth < rough


@pytest.mark.slow
@pytest.mark.parametrize("v", SPEEDS)
def test_displacement_non_increasing_in_tau(noise, v):
    box = SceneBox()
    d_bar = [displacement_stats(MotionParams(v=v, tau=tau), 1000, 600, 30.0, noise, box)
             for tau in (0.0, 0.25, 0.5, 0.75, 1.0)]
    assert all(a >= b for a, b in zip(d_bar, d_bar[1:]))


def test_single_step_displacement_matches_two_frames(noise):
    box, params = SceneBox(), MotionParams(v=0.15, tau=0.5)
    ids = np.arange(50)
    first = context_positions(ids, 0.0, params, noise, box)
    second = context_positions(ids, 1 / 120.0, params, noise, box)
    expected = np.linalg.norm(second - first, axis=1).mean()
    assert displacement_stats(params, 50, 1, 120.0, noise, box) == pytest.approx(expected, rel=1e-12)


def test_displacement_grows_with_speed(noise):
    box = SceneBox()
    slow = displacement_stats(MotionParams(v=SPEEDS[0]), 200, 240, 120.0, noise, box)
    fast = displacement_stats(MotionParams(v=SPEEDS[-1]), 200, 240, 120.0, noise, box)
    assert fast > slow > 0


def test_displacement_chunking_does_not_change_result(noise):
    box, params = SceneBox(), MotionParams(v=0.1)
    whole = displacement_stats(params, 50, 100, 120.0, noise, box, chunk_frames=1000)
    chunked = displacement_stats(params, 50, 100, 120.0, noise, box, chunk_frames=7)
    assert chunked == pytest.approx(whole, rel=1e-12)


def test_reaction_phases(script):
    assert reaction_phase(4.99, script) == "before"
    assert reaction_phase(5.0, script) == "attraction"
    assert reaction_phase(10.0, script) == "bond"
    assert reaction_phase(11.0, script) == "repulsion"
    assert reaction_phase(16.0, script) == "after"
    assert is_focus_time(5.0, script) and not is_focus_time(16.0, script)
    assert script.focus_window == 11.0
    assert script.truncated_seconds(20.0) == 0.0
    assert script.shown_durations(20.0) == (5.0, 1.0, 5.0)


def test_repulsion_cut_off_at_end_of_animation(script):
    assert script.truncated_seconds(14.0) == 2.0
    assert script.shown_durations(14.0) == (5.0, 1.0, 3.0)
    assert script.bond_shown(14.0)
    assert script.shown_durations(10.5) == (5.0, 0.5, 0.0)
    assert not script.bond_shown(10.5)


def test_phase_frames_at_both_rates(script):
    assert script.phase_frames(120) == {"attraction_start": 600, "bond_start": 1200,
                                        "repulsion_start": 1320, "focus_end": 1920}
    assert script.phase_frames(30) == {"attraction_start": 150, "bond_start": 300,
                                       "repulsion_start": 330, "focus_end": 480}


def test_invalid_scripts_rejected():
    with pytest.raises(ReactionContractError):
        ReactionScript(partner_a=1, partner_b=1, t_start=5.0, target=(0, 0, 0), bond_offset=(0.2, 0, 0))
    with pytest.raises(ReactionContractError):
        ReactionScript(partner_a=1, partner_b=2, t_start=5.0, target=(0, 0, 0), bond_offset=(0.2, 0, 0),
                       d_bond=0.0)


def test_focus_outside_window_follows_unsmoothed_path(noise, script):
    box = SceneBox()
    params = MotionParams(v=0.1, tau=1.0)
    ids = np.array(script.partners)
    for t in (0.0, 4.5, 16.0, 19.9):
        expected = context_positions(ids, t, params.unsmoothed(), noise, box)
        assert np.array_equal(focus_positions(t, script, params, noise, box), expected)


def test_bond_offset_constant(noise, script):
    box = SceneBox()
    params = MotionParams(v=0.2)
    for t in np.linspace(script.attraction_end, script.bond_end, 13, endpoint=False):
        a, b = focus_positions(float(t), script, params, noise, box)
        assert np.allclose(a - b, script.bond_offset, rtol=0, atol=1e-12)


def test_docked_at_attraction_end(noise, script):
    box = SceneBox()
    params = MotionParams(v=0.1)
    half = np.asarray(script.bond_offset) / 2
    docked = focus_positions(script.attraction_end, script, params, noise, box)
    assert np.allclose(docked[0], np.asarray(script.target) + half, atol=1e-12)
    assert np.allclose(docked[1], np.asarray(script.target) - half, atol=1e-12)


def test_focus_motion_continuous_at_phase_boundaries(noise, script):
    box = SceneBox()
    params = MotionParams(v=0.2)
    eps = 1e-7
    for boundary in (script.t_start, script.attraction_end, script.bond_end, script.focus_end):
        before = focus_positions(boundary - eps, script, params, noise, box)
        after = focus_positions(boundary, script, params, noise, box)
        assert np.abs(before - after).max() < 1e-4


def test_focus_position_rejects_non_partner(noise, script):
    with pytest.raises(ReactionContractError):
        focus_position(4, 6.0, script, MotionParams(v=0.1), noise, SceneBox())
    single = focus_position(8, 6.0, script, MotionParams(v=0.1), noise, SceneBox())
    assert np.array_equal(single, focus_positions(6.0, script, MotionParams(v=0.1), noise, SceneBox())[1])


def test_molecule_positions_overlay_partners(noise, script):
    box = SceneBox()
    params = MotionParams(v=0.1, tau=1.0)
    positions = molecule_positions(10.5, 20, params, noise, box, script)
    assert positions.shape == (20, 3)
    assert np.array_equal(positions[[3, 8]], focus_positions(10.5, script, params, noise, box))
    assert np.array_equal(positions[0], context_positions(np.array([0]), 10.5, params, noise, box)[0])
