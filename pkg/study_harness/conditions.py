"""
Study design: the 2 GMS x 5 VMS condition matrix, per-condition speed level,
reaction script and seed, plus the presets shown around the main trials.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from brownian_motion.motion import ReactionScript
from molecule_render.scene import ScenePopulation, build_scene, focus_pair_with_colors
from .settings import StimulusConfig
from .speed_models import compensated_speed, speed_for_percent, speed_percent

PRESETS = ("calibration-min", "calibration-max", "test-run", "guideline")

_SCENE_STREAM = 0
_REACTION_STREAM = 1
_NOISE_STREAM = 2


def derive_seed(seed: int, stream: int) -> int:
    """Independent 64-bit seed for one random stream of a stimulus."""
    state = np.random.SeedSequence([seed & (2 ** 64 - 1), stream]).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


@dataclass(frozen=True)
class StimulusCondition:
    """
    One stimulus of the study.

    gms is "off" (tau = 0) or "on" (tau = 1); vms_trail is the trail length
    0..4; speed_level indexes the configured ground-truth speeds. With
    `compensated` set, the speed is raised to the compensated speed of the
    trail-2 model.
    """
    gms: str
    vms_trail: int
    speed_level: int
    seed: int
    reaction: ReactionScript
    compensated: bool = False
    preset: Optional[str] = None

    @property
    def cell(self):
        return (self.gms, self.vms_trail)

    @property
    def label(self) -> str:
        name = f"gms-{self.gms}_trail{self.vms_trail}_speed{self.speed_level}"
        if self.compensated:
            name += "_compensated"
        return f"{self.preset}_{name}" if self.preset else name

    def tau(self, config: StimulusConfig) -> float:
        return config.harness.tau(self.gms)

    def speed_percent(self, config: StimulusConfig) -> float:
        """Ground-truth speed in percent of the study's speed range (compensated if requested)."""
        s = speed_percent(self.speed_level, len(config.motion.speed_levels))
        return compensated_speed(s) if self.compensated else s

    def v(self, config: StimulusConfig) -> float:
        if self.compensated:
            return speed_for_percent(self.speed_percent(config), config.motion.speed_levels)
        return config.motion.speed(self.speed_level)

    def to_dict(self) -> Dict[str, Any]:
        r = self.reaction
        return {
            "gms": self.gms,
            "vms_trail": self.vms_trail,
            "speed_level": self.speed_level,
            "seed": str(self.seed),
            "compensated": self.compensated,
            "preset": self.preset,
            "reaction": {
                "partner_a": r.partner_a,
                "partner_b": r.partner_b,
                "t_start": r.t_start,
                "d_attract": r.d_attract,
                "d_bond": r.d_bond,
                "d_repulse": r.d_repulse,
                "target": list(r.target),
                "bond_offset": list(r.bond_offset),
            },
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StimulusCondition":
        r = data["reaction"]
        reaction = ReactionScript(
            partner_a=int(r["partner_a"]), partner_b=int(r["partner_b"]), t_start=float(r["t_start"]),
            target=tuple(float(x) for x in r["target"]), bond_offset=tuple(float(x) for x in r["bond_offset"]),
            d_attract=float(r["d_attract"]), d_bond=float(r["d_bond"]), d_repulse=float(r["d_repulse"]),
        )
        return cls(gms=data["gms"], vms_trail=int(data["vms_trail"]), speed_level=int(data["speed_level"]),
                   seed=int(data["seed"]), reaction=reaction, compensated=bool(data.get("compensated", False)),
                   preset=data.get("preset"))


def scene_for(config: StimulusConfig, seed: int) -> ScenePopulation:
    """Population of the stimulus with this seed."""
    return build_scene(config.scene, derive_seed(seed, _SCENE_STREAM))


def noise_seed(seed: int) -> int:
    return derive_seed(seed, _NOISE_STREAM)


def draw_reaction_script(config: StimulusConfig, population: ScenePopulation, seed: int,
                         focus_pair: Optional[Sequence[int]] = None) -> ReactionScript:
    """
    Random reaction for a population: start at a random frame inside the
    configured start window, target inside the central region of the box,
    partners attached at one molecule diameter in a random direction.
    """
    rng = np.random.default_rng(derive_seed(seed, _REACTION_STREAM))
    reaction = config.motion.reaction
    fps = config.smoothing.frame_rate
    first = int(np.ceil(reaction.start_window[0] * fps - 1e-9))
    last = int(np.floor(reaction.start_window[1] * fps + 1e-9))
    t_start = int(rng.integers(first, last + 1)) / fps

    lower, upper = population.box.central_region(reaction.target_region)
    target = rng.uniform(lower, upper)
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    offset = direction * population.d_mol

    partner_a, partner_b = focus_pair if focus_pair is not None else population.focus_pair
    return ReactionScript(
        partner_a=int(partner_a), partner_b=int(partner_b), t_start=t_start,
        target=tuple(float(x) for x in target), bond_offset=tuple(float(x) for x in offset),
        d_attract=reaction.d_attract, d_bond=reaction.d_bond, d_repulse=reaction.d_repulse,
    )


def make_condition(config: StimulusConfig, gms: str, vms_trail: int, speed_level: int, seed: int,
                   compensated: bool = False, preset: Optional[str] = None,
                   focus_colors: Optional[Sequence[str]] = None) -> StimulusCondition:
    """Build one condition, drawing its scene-dependent reaction script from the seed."""
    config.harness.tau(gms)
    config.motion.speed(speed_level)
    if vms_trail not in config.smoothing.trail_lengths:
        raise ValueError(f"Trail length {vms_trail} is not one of {config.smoothing.trail_lengths}")
    population = scene_for(config, seed)
    pair = focus_pair_with_colors(population, focus_colors, seed) if focus_colors else None
    reaction = draw_reaction_script(config, population, seed, pair)
    return StimulusCondition(gms=gms, vms_trail=vms_trail, speed_level=speed_level, seed=seed,
                             reaction=reaction, compensated=compensated, preset=preset)


def condition_matrix(seed: int, config: StimulusConfig) -> List[StimulusCondition]:
    """
    The randomised trial list: every (GMS, trail) cell exactly once, in a seeded
    order, each with a seeded speed level, reaction and stimulus seed.
    """
    cells = [(gms, trail) for gms, _ in config.harness.gms_levels for trail in config.smoothing.trail_lengths]
    sequence = np.random.SeedSequence(seed & (2 ** 64 - 1))
    rng = np.random.default_rng(sequence)
    order = rng.permutation(len(cells))
    levels = rng.integers(1, len(config.motion.speed_levels) + 1, size=len(cells))
    children = sequence.spawn(len(cells))

    conditions = []
    for position, cell_index in enumerate(order):
        gms, trail = cells[cell_index]
        state = children[position].generate_state(2, dtype=np.uint32)
        condition_seed = int(state[0]) | (int(state[1]) << 32)
        conditions.append(make_condition(config, gms, trail, int(levels[position]), condition_seed))
    return conditions


def preset_conditions(preset: str, seed: int, config: StimulusConfig,
                      speed_level: Optional[int] = None) -> List[StimulusCondition]:
    """
    Stimuli shown around the main trials.

    calibration-min / calibration-max: no smoothing at the slowest / fastest speed.
    test-run: long trails without GMS, red and green reactants.
    guideline: design-guideline settings at the given speed level (default: every level).
    """
    n_levels = len(config.motion.speed_levels)
    if preset == "calibration-min":
        return [make_condition(config, "off", 0, 1, seed, preset=preset)]
    if preset == "calibration-max":
        return [make_condition(config, "off", 0, n_levels, seed, preset=preset)]
    if preset == "test-run":
        test_run = dict(config.harness.test_run)
        return [make_condition(config, str(test_run["gms"]), int(test_run["trail_length"]),
                               speed_level or n_levels, seed, preset=preset, focus_colors=list(test_run["colors"]))]
    if preset == "guideline":
        guidelines = dict(config.harness.guidelines)
        levels = [speed_level] if speed_level else range(1, n_levels + 1)
        return [make_condition(config, "on" if level >= int(guidelines["gms_from_speed_level"]) else "off",
                               int(guidelines["trail_length"]), level, derive_seed(seed, 100 + level),
                               compensated=bool(guidelines["compensate"]), preset=preset)
                for level in levels]
    raise ValueError(f"Unknown preset '{preset}', expected one of {PRESETS}")
