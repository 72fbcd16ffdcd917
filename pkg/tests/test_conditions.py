from collections import Counter

import pytest

from study_harness.conditions import (
    PRESETS,
    StimulusCondition,
    condition_matrix,
    derive_seed,
    make_condition,
    preset_conditions,
    scene_for,
)


def test_matrix_covers_every_cell_once(small_config):
    conditions = condition_matrix(42, small_config)
    assert len(conditions) == 10
    assert {c.cell for c in conditions} == {(g, t) for g in ("off", "on") for t in range(5)}
    assert len({c.seed for c in conditions}) == 10


def test_matrix_is_deterministic(small_config):
    assert condition_matrix(7, small_config) == condition_matrix(7, small_config)
    assert condition_matrix(7, small_config) != condition_matrix(8, small_config)


@pytest.mark.slow
def test_speed_levels_are_balanced(small_config):
    counts = Counter(c.speed_level for seed in range(400) for c in condition_matrix(seed, small_config))
    total = sum(counts.values())
    assert set(counts) == {1, 2, 3, 4}
    for level in counts:
        assert counts[level] / total == pytest.approx(0.25, abs=0.03)


def test_reaction_start_on_frame_grid(small_config):
    fps = small_config.smoothing.frame_rate
    for condition in condition_matrix(3, small_config):
        reaction = condition.reaction
        frames = reaction.t_start * fps
        assert frames == pytest.approx(round(frames), abs=1e-9)
        assert 0.5 <= reaction.t_start <= 1.0
        assert reaction.bond_shown(small_config.harness.duration)
        population = scene_for(small_config, condition.seed)
        assert set(reaction.partners) == set(population.focus_pair)


def test_label_and_speed(small_config):
    condition = make_condition(small_config, "off", 2, 3, seed=5)
    assert condition.label == "gms-off_trail2_speed3"
    assert condition.tau(small_config) == 0.0
    assert condition.v(small_config) == 0.15
    compensated = make_condition(small_config, "on", 2, 4, seed=5, compensated=True)
    assert compensated.label == "gms-on_trail2_speed4_compensated"
    assert compensated.speed_percent(small_config) == pytest.approx(151.5)
    assert compensated.v(small_config) == pytest.approx(0.05 + 0.15 * 1.515)


def test_invalid_conditions_rejected(small_config):
    with pytest.raises(ValueError):
        make_condition(small_config, "maybe", 0, 1, seed=1)
    with pytest.raises(ValueError):
        make_condition(small_config, "off", 5, 1, seed=1)
    with pytest.raises(ValueError):
        make_condition(small_config, "off", 0, 9, seed=1)


def test_dict_round_trip(small_config):
    condition = make_condition(small_config, "on", 4, 2, seed=2 ** 63 + 11, preset="guideline")
    data = condition.to_dict()
    assert data["seed"] == str(2 ** 63 + 11)
    assert StimulusCondition.from_dict(data) == condition


def test_presets(small_config):
    (low,) = preset_conditions("calibration-min", 1, small_config)
    (high,) = preset_conditions("calibration-max", 1, small_config)
    assert (low.gms, low.vms_trail, low.speed_level) == ("off", 0, 1)
    assert (high.gms, high.vms_trail, high.speed_level) == ("off", 0, 4)
    assert low.label == "calibration-min_gms-off_trail0_speed1"

    (test_run,) = preset_conditions("test-run", 1, small_config)
    population = scene_for(small_config, test_run.seed)
    assert test_run.vms_trail == 4 and test_run.gms == "off"
    assert [population.type_of(m).color for m in test_run.reaction.partners] == ["#E41A1C", "#4DAF4A"]

    guideline = preset_conditions("guideline", 1, small_config)
    assert [c.gms for c in guideline] == ["off", "off", "on", "on"]
    assert all(c.vms_trail == 2 and c.compensated for c in guideline)
    assert len(preset_conditions("guideline", 1, small_config, speed_level=2)) == 1

    assert set(PRESETS) == {"calibration-min", "calibration-max", "test-run", "guideline"}
    with pytest.raises(ValueError):
        preset_conditions("warmup", 1, small_config)


def test_derived_seeds_are_independent():
    seeds = {derive_seed(9, stream) for stream in range(5)}
    assert len(seeds) == 5
    assert derive_seed(9, 1) == derive_seed(9, 1)
    assert all(0 <= s < 2 ** 64 for s in seeds)
