"""
Typed stimulus configuration.

The YAML/JSON document is parsed into frozen records, validated once, and
can be turned back into a plain dict so that manifests carry the exact
configuration a stimulus was made with.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml

from brownian_motion.motion import MotionParams, SceneBox
from brownian_motion.noise import KERNELS, NoiseField
from molecule_render.rasterizer import Camera
from molecule_render.scene import SET1_PALETTE, SceneConfig, SceneConfigError, default_shape_library

SECTIONS = ("scene", "motion", "render", "smoothing", "harness")


@dataclass(frozen=True)
class ReactionConfig:
    start_window: Tuple[float, float] = (5.0, 10.0)
    d_attract: float = 5.0
    d_bond: float = 1.0
    d_repulse: float = 5.0
    target_region: float = 0.6

    @property
    def focus_window(self) -> float:
        return self.d_attract + self.d_bond + self.d_repulse


@dataclass(frozen=True)
class MotionConfig:
    speed_levels: Tuple[float, ...] = (0.05, 0.10, 0.15, 0.20)
    component_stride: int = 104729
    molecule_stride: int = 97
    smoothing_kernel: str = "quintic"
    reaction: ReactionConfig = field(default_factory=ReactionConfig)

    def params(self, v: float, tau: float) -> MotionParams:
        return MotionParams(v=v, tau=tau, component_stride=self.component_stride,
                            molecule_stride=self.molecule_stride)

    def speed(self, level: int) -> float:
        if not 1 <= level <= len(self.speed_levels):
            raise ValueError(f"Speed level must lie in 1..{len(self.speed_levels)}, got {level}")
        return self.speed_levels[level - 1]


@dataclass(frozen=True)
class RenderConfig:
    width: int = 1024
    height: int = 576
    background: Tuple[float, float, float] = (0.004, 0.004, 0.006)
    light_direction: Tuple[float, float, float] = (-0.4, 0.5, 0.77)
    ambient: float = 0.2
    diffuse: float = 0.8
    image_format: str = "png"


@dataclass(frozen=True)
class SmoothingConfig:
    trail_lengths: Tuple[int, ...] = (0, 1, 2, 3, 4)
    frame_rate: float = 120.0
    decimation: int = 4
    calibration_molecules: int = 1000
    calibration_frames: int = 2400


@dataclass(frozen=True)
class HarnessConfig:
    duration: float = 20.0
    gms_levels: Tuple[Tuple[str, float], ...] = (("off", 0.0), ("on", 1.0))
    guidelines: Tuple[Tuple[str, Any], ...] = (("trail_length", 2), ("gms_from_speed_level", 3), ("compensate", True))
    test_run: Tuple[Tuple[str, Any], ...] = (("trail_length", 4), ("gms", "off"), ("colors", ("#E41A1C", "#4DAF4A")))

    def tau(self, gms: str) -> float:
        levels = dict(self.gms_levels)
        if gms not in levels:
            raise ValueError(f"Unknown GMS level '{gms}', expected one of {sorted(levels)}")
        return levels[gms]


@dataclass(frozen=True)
class StimulusConfig:
    """Complete, validated stimulus configuration."""
    scene: SceneConfig = field(default_factory=SceneConfig)
    motion: MotionConfig = field(default_factory=MotionConfig)
    render: RenderConfig = field(default_factory=RenderConfig)
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    harness: HarnessConfig = field(default_factory=HarnessConfig)

    @property
    def n_frames(self) -> int:
        """Frames rendered at the internal frame rate."""
        return int(round(self.harness.duration * self.smoothing.frame_rate))

    @property
    def output_frame_rate(self) -> float:
        return self.smoothing.frame_rate / self.smoothing.decimation

    def camera(self) -> Camera:
        r = self.render
        return Camera(width=r.width, height=r.height, box=self.scene.box, background=tuple(r.background),
                      light_direction=tuple(r.light_direction), ambient=r.ambient, diffuse=r.diffuse)

    def noise(self, seed: int) -> NoiseField:
        return NoiseField(seed=seed, smoothing_kernel=self.motion.smoothing_kernel)

    def validate(self) -> "StimulusConfig":
        """Check cross-section constraints; returns self for chaining."""
        errors = []
        reaction = self.motion.reaction
        if reaction.start_window[0] > reaction.start_window[1] or reaction.start_window[0] < 0:
            errors.append(f"reaction start window {reaction.start_window} is not an interval of positive times")
        # repulsion may run past the last frame, attraction and bond may not
        latest_bond_end = reaction.start_window[1] + reaction.d_attract + reaction.d_bond
        if latest_bond_end > self.harness.duration:
            errors.append(f"latest bond phase ends at {latest_bond_end} s, "
                          f"after the end of the {self.harness.duration} s animation")
        if not 0 < reaction.target_region <= 1:
            errors.append("reaction target_region must lie in (0, 1]")
        if self.motion.smoothing_kernel not in KERNELS:
            errors.append(f"smoothing_kernel must be one of {KERNELS}")
        if any(v <= 0 for v in self.motion.speed_levels) or len(self.motion.speed_levels) < 2:
            errors.append("speed_levels needs at least two positive speeds")
        if list(self.motion.speed_levels) != sorted(self.motion.speed_levels):
            errors.append("speed_levels must be increasing")
        if self.smoothing.frame_rate <= 0 or self.smoothing.decimation < 1:
            errors.append("frame_rate must be positive and decimation at least 1")
        if abs(self.harness.duration * self.smoothing.frame_rate - self.n_frames) > 1e-9:
            errors.append("duration must span a whole number of frames")
        if any(not 0 <= t <= 4 for t in self.smoothing.trail_lengths):
            errors.append("trail_lengths must lie in 0..4")
        if self.render.image_format not in ("png", "ppm"):
            errors.append("image_format must be png or ppm")
        if self.render.width <= 0 or self.render.height <= 0:
            errors.append("render width and height must be positive")
        if errors:
            raise ValueError(f"Configuration errors: {'; '.join(errors)}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Plain-data form with the same layout as the config file."""
        scene, motion, reaction = self.scene, self.motion, self.motion.reaction
        return {
            "scene": {
                "n_molecules": scene.n_molecules,
                "n_types": scene.type_count,
                "box": list(scene.box.size),
                "palette": list(scene.palette),
                "shapes": [{"atoms": [list(a) for a in s["atoms"]]} for s in scene.shapes],
            },
            "motion": {
                "speed_levels": list(motion.speed_levels),
                "component_stride": motion.component_stride,
                "molecule_stride": motion.molecule_stride,
                "smoothing_kernel": motion.smoothing_kernel,
                "reaction": {
                    "start_window": list(reaction.start_window),
                    "d_attract": reaction.d_attract,
                    "d_bond": reaction.d_bond,
                    "d_repulse": reaction.d_repulse,
                    "target_region": reaction.target_region,
                },
            },
            "render": {
                "width": self.render.width,
                "height": self.render.height,
                "background": list(self.render.background),
                "light_direction": list(self.render.light_direction),
                "ambient": self.render.ambient,
                "diffuse": self.render.diffuse,
                "image_format": self.render.image_format,
            },
            "smoothing": {
                "trail_lengths": list(self.smoothing.trail_lengths),
                "frame_rate": self.smoothing.frame_rate,
                "decimation": self.smoothing.decimation,
                "calibration_molecules": self.smoothing.calibration_molecules,
                "calibration_frames": self.smoothing.calibration_frames,
            },
            "harness": {
                "duration": self.harness.duration,
                "gms_levels": dict(self.harness.gms_levels),
                "guidelines": _plain(dict(self.harness.guidelines)),
                "test_run": _plain(dict(self.harness.test_run)),
            },
        }


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _frozen(value: Any) -> Any:
    if isinstance(value, dict):
        return tuple((k, _frozen(v)) for k, v in value.items())
    if isinstance(value, list):
        return tuple(_frozen(v) for v in value)
    return value


def _section(raw: Dict[str, Any], name: str, allowed: Tuple[str, ...]) -> Dict[str, Any]:
    section = raw.get(name) or {}
    if not isinstance(section, dict):
        raise ValueError(f"Config section '{name}' must be a mapping")
    unknown = set(section) - set(allowed)
    if unknown:
        raise ValueError(f"Unknown keys in config section '{name}': {sorted(unknown)}")
    return section


def config_from_dict(raw: Optional[Dict[str, Any]]) -> StimulusConfig:
    """Build a validated StimulusConfig from plain data; missing keys take defaults."""
    raw = raw or {}
    unknown = set(raw) - set(SECTIONS)
    if unknown:
        raise ValueError(f"Unknown config sections: {sorted(unknown)}")

    s = _section(raw, "scene", ("n_molecules", "n_types", "box", "palette", "shapes"))
    shapes = s.get("shapes") or default_shape_library()
    if not all(isinstance(shape, dict) and "atoms" in shape for shape in shapes):
        raise SceneConfigError("Every shape library entry needs an 'atoms' list")
    scene = SceneConfig(
        n_molecules=int(s.get("n_molecules", 1000)),
        box=SceneBox(size=tuple(float(x) for x in s.get("box", (16.0, 9.0, 4.0)))),
        palette=tuple(s.get("palette", SET1_PALETTE)),
        shapes=tuple({"atoms": [tuple(float(x) for x in atom) for atom in shape["atoms"]]} for shape in shapes),
        n_types=int(s["n_types"]) if s.get("n_types") is not None else None,
    )

    m = _section(raw, "motion", ("speed_levels", "component_stride", "molecule_stride", "smoothing_kernel",
                                 "reaction"))
    r = m.get("reaction") or {}
    unknown = set(r) - {"start_window", "d_attract", "d_bond", "d_repulse", "target_region"}
    if unknown:
        raise ValueError(f"Unknown keys in config section 'motion.reaction': {sorted(unknown)}")
    motion = MotionConfig(
        speed_levels=tuple(float(v) for v in m.get("speed_levels", (0.05, 0.10, 0.15, 0.20))),
        component_stride=int(m.get("component_stride", 104729)),
        molecule_stride=int(m.get("molecule_stride", 97)),
        smoothing_kernel=str(m.get("smoothing_kernel", "quintic")),
        reaction=ReactionConfig(
            start_window=tuple(float(x) for x in r.get("start_window", (5.0, 10.0))),
            d_attract=float(r.get("d_attract", 5.0)),
            d_bond=float(r.get("d_bond", 1.0)),
            d_repulse=float(r.get("d_repulse", 5.0)),
            target_region=float(r.get("target_region", 0.6)),
        ),
    )

    rd = _section(raw, "render", ("width", "height", "background", "light_direction", "ambient", "diffuse",
                                  "image_format"))
    render = RenderConfig(
        width=int(rd.get("width", 1024)),
        height=int(rd.get("height", 576)),
        background=tuple(float(c) for c in rd.get("background", (0.004, 0.004, 0.006))),
        light_direction=tuple(float(c) for c in rd.get("light_direction", (-0.4, 0.5, 0.77))),
        ambient=float(rd.get("ambient", 0.2)),
        diffuse=float(rd.get("diffuse", 0.8)),
        image_format=str(rd.get("image_format", "png")).lower(),
    )

    sm = _section(raw, "smoothing", ("trail_lengths", "frame_rate", "decimation", "calibration_molecules",
                                     "calibration_frames"))
    smoothing = SmoothingConfig(
        trail_lengths=tuple(int(t) for t in sm.get("trail_lengths", (0, 1, 2, 3, 4))),
        frame_rate=float(sm.get("frame_rate", 120.0)),
        decimation=int(sm.get("decimation", 4)),
        calibration_molecules=int(sm.get("calibration_molecules", 1000)),
        calibration_frames=int(sm.get("calibration_frames", 2400)),
    )

    h = _section(raw, "harness", ("duration", "gms_levels", "guidelines", "test_run"))
    defaults = HarnessConfig()
    harness = HarnessConfig(
        duration=float(h.get("duration", defaults.duration)),
        gms_levels=tuple((str(k), float(v)) for k, v in (h.get("gms_levels") or dict(defaults.gms_levels)).items()),
        guidelines=_frozen(h.get("guidelines")) if h.get("guidelines") else defaults.guidelines,
        test_run=_frozen(h.get("test_run")) if h.get("test_run") else defaults.test_run,
    )

    return StimulusConfig(scene=scene, motion=motion, render=render, smoothing=smoothing, harness=harness).validate()


def load_stimulus_config(config_path: Path) -> StimulusConfig:
    """Load configuration from a YAML (or JSON) file."""
    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found at {config_path}")
    with open(config_path, 'r', encoding='utf-8') as f:
        return config_from_dict(yaml.safe_load(f))
