"""
Molecular motion: nested-noise Brownian paths for context molecules and the
scripted attraction / bond / repulsion choreography for the two reactants.

Positions are first computed as noise-domain coordinates in [0, 1]^3 and
then mapped affinely into the scene box.
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .noise import NoiseField

PHASES = ("before", "attraction", "bond", "repulsion", "after")


class ReactionContractError(ValueError):
    """Raised when a reaction script is queried or built inconsistently."""


@dataclass(frozen=True)
class MotionParams:
    """
    Parameters of the context trajectories.

    Args:
        v: Ground-truth speed in noise-domain units per second
        tau: Geometric smoothing factor, 0 = full jitter, 1 = nested term removed
        component_stride: Seed distance between the x/y/z components
        molecule_stride: Seed distance between consecutive molecules
    """
    v: float
    tau: float = 0.0
    component_stride: int = 104729
    molecule_stride: int = 97

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError(f"Speed v must be positive, got {self.v}")
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"Smoothing factor tau must lie in [0, 1], got {self.tau}")
        if self.component_stride <= 0 or self.molecule_stride <= 0:
            raise ValueError("Seed strides must be positive")

    def unsmoothed(self) -> "MotionParams":
        """Same parameters with tau = 0 (used for focus molecules)."""
        return replace(self, tau=0.0)


@dataclass(frozen=True)
class SceneBox:
    """Axis-aligned scene extents in scene units."""
    size: Tuple[float, float, float] = (16.0, 9.0, 4.0)
    origin: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if len(self.size) != 3 or min(self.size) <= 0:
            raise ValueError(f"Scene box size must be three positive extents, got {self.size}")

    def to_scene(self, unit: np.ndarray) -> np.ndarray:
        """Map noise-domain coordinates in [0, 1]^3 into the box."""
        return np.asarray(self.origin) + np.asarray(unit) * np.asarray(self.size)

    def central_region(self, fraction: float) -> Tuple[np.ndarray, np.ndarray]:
        """Lower and upper corners of the centred sub-box covering `fraction` of each extent."""
        size = np.asarray(self.size)
        margin = size * (1.0 - fraction) / 2.0
        lower = np.asarray(self.origin) + margin
        return lower, lower + size * fraction


@dataclass(frozen=True)
class ReactionScript:
    """
    Choreography of the single reaction shown in a stimulus.

    The focus window is [t_start, t_start + d_attract + d_bond + d_repulse).
    """
    partner_a: int
    partner_b: int
    t_start: float
    target: Tuple[float, float, float]
    bond_offset: Tuple[float, float, float]
    d_attract: float = 5.0
    d_bond: float = 1.0
    d_repulse: float = 5.0

    def __post_init__(self):
        if self.partner_a == self.partner_b:
            raise ReactionContractError("Reaction partners must be two different molecules")
        if self.t_start < 0:
            raise ReactionContractError(f"Reaction start must be non-negative, got {self.t_start}")
        if min(self.d_attract, self.d_bond, self.d_repulse) <= 0:
            raise ReactionContractError("Reaction phase durations must be positive")

    @property
    def attraction_end(self) -> float:
        return self.t_start + self.d_attract

    @property
    def bond_end(self) -> float:
        return self.attraction_end + self.d_bond

    @property
    def focus_end(self) -> float:
        return self.bond_end + self.d_repulse

    @property
    def focus_window(self) -> float:
        return self.d_attract + self.d_bond + self.d_repulse

    @property
    def partners(self) -> Tuple[int, int]:
        return (self.partner_a, self.partner_b)

    def truncated_seconds(self, duration: float) -> float:
        """Part of the repulsion phase that falls after the end of an animation of `duration` seconds."""
        return max(0.0, self.focus_end - duration)

    def shown_durations(self, duration: float) -> Tuple[float, float, float]:
        """Attraction, bond and repulsion time visible in an animation of `duration` seconds."""
        bounds = [min(b, duration) for b in (self.t_start, self.attraction_end, self.bond_end, self.focus_end)]
        return tuple(max(0.0, bounds[k + 1] - bounds[k]) for k in range(3))

    def bond_shown(self, duration: float) -> bool:
        """True when attraction and bond complete inside the animation; only repulsion may be cut off."""
        return self.bond_end <= duration

    def phase_frames(self, frame_rate: float) -> dict:
        """First frame index of every phase boundary at the given frame rate."""
        return {
            "attraction_start": int(round(self.t_start * frame_rate)),
            "bond_start": int(round(self.attraction_end * frame_rate)),
            "repulsion_start": int(round(self.bond_end * frame_rate)),
            "focus_end": int(round(self.focus_end * frame_rate)),
        }


def seed_offset(i, c, params: MotionParams):
    """Per-(molecule, component) noise offset S = (c + 1) * component_stride + i * molecule_stride."""
    return (np.asarray(c) + 1) * params.component_stride + np.asarray(i) * params.molecule_stride


def context_position(i: int, c: int, t: float, params: MotionParams, noise: NoiseField) -> float:
    """
    Noise-domain coordinate of component c of molecule i at time t:
    n(S + t*v + (1 - tau) * n(S + t*v)).
    """
    base = float(seed_offset(i, c, params)) + t * params.v
    return noise.sample(base + (1.0 - params.tau) * noise.sample(base))


def context_coordinates(ids: np.ndarray, t, params: MotionParams, noise: NoiseField) -> np.ndarray:
    """
    Vectorised context_position for all components.

    Args:
        ids: Molecule indices, shape (M,)
        t: Time in seconds, scalar or shape (F,)

    Returns:
        Noise-domain coordinates, shape (M, 3) for scalar t, else (F, M, 3)
    """
    ids = np.asarray(ids, dtype=np.int64)
    offsets = seed_offset(ids[:, None], np.arange(3)[None, :], params).astype(np.float64)
    times = np.asarray(t, dtype=np.float64)
    base = offsets + times[..., None, None] * params.v
    return noise.sample_array(base + (1.0 - params.tau) * noise.sample_array(base))


def context_positions(ids: np.ndarray, t: float, params: MotionParams, noise: NoiseField,
                      box: SceneBox) -> np.ndarray:
    """Scene-space positions of molecules `ids` at time t, shape (M, 3)."""
    return box.to_scene(context_coordinates(ids, t, params, noise))


def _ease(x: float) -> float:
    """Smoothstep ramp on [0, 1]."""
    x = min(max(x, 0.0), 1.0)
    return x * x * (3.0 - 2.0 * x)


def reaction_phase(t: float, script: ReactionScript) -> str:
    """Name of the reaction phase active at time t."""
    if t < script.t_start:
        return "before"
    if t < script.attraction_end:
        return "attraction"
    if t < script.bond_end:
        return "bond"
    if t < script.focus_end:
        return "repulsion"
    return "after"


def is_focus_time(t: float, script: ReactionScript) -> bool:
    """True while the two reactants are the focus elements."""
    return script.t_start <= t < script.focus_end


def focus_positions(t: float, script: ReactionScript, params: MotionParams, noise: NoiseField,
                    box: SceneBox) -> np.ndarray:
    """
    Scene-space positions of (partner_a, partner_b) at time t, shape (2, 3).

    Focus molecules always move without geometric smoothing. During the bond
    phase both partners follow partner_a's random path, displaced so that the
    pair starts the bond exactly at target +/- bond_offset / 2.
    """
    focus_params = params.unsmoothed()
    ids = np.array(script.partners, dtype=np.int64)
    random_path = context_positions(ids, t, focus_params, noise, box)

    target = np.asarray(script.target, dtype=np.float64)
    half = np.asarray(script.bond_offset, dtype=np.float64) / 2.0
    docked = np.stack([target + half, target - half])

    def drift(at: float) -> np.ndarray:
        shared = context_positions(ids[:1], np.array([at, script.attraction_end]),
                                   focus_params, noise, box)
        return shared[0, 0] - shared[1, 0]

    def bonded(at: float) -> np.ndarray:
        # pair centre stays inside the box, so the offset is never distorted
        lower = np.asarray(box.origin) + np.abs(half)
        upper = np.asarray(box.origin) + np.asarray(box.size) - np.abs(half)
        centre = np.clip(target + drift(at), lower, upper)
        return np.stack([centre + half, centre - half])

    phase = reaction_phase(t, script)
    if phase == "attraction":
        w = _ease((t - script.t_start) / script.d_attract)
        return (1.0 - w) * random_path + w * docked
    if phase == "bond":
        return bonded(t)
    if phase == "repulsion":
        w = 1.0 - _ease((t - script.bond_end) / script.d_repulse)
        return (1.0 - w) * random_path + w * bonded(script.bond_end)
    return random_path


def focus_position(m: int, t: float, script: ReactionScript, params: MotionParams, noise: NoiseField,
                   box: SceneBox) -> np.ndarray:
    """Scene-space position of reaction partner m at time t."""
    if m not in script.partners:
        raise ReactionContractError(f"Molecule {m} is not a partner of this reaction {script.partners}")
    return focus_positions(t, script, params, noise, box)[script.partners.index(m)]


def molecule_positions(t: float, n_molecules: int, params: MotionParams, noise: NoiseField, box: SceneBox,
                       script: Optional[ReactionScript] = None) -> np.ndarray:
    """Scene-space positions of the whole population at time t, shape (n_molecules, 3)."""
    positions = context_positions(np.arange(n_molecules), t, params, noise, box)
    if script is not None:
        positions[list(script.partners)] = focus_positions(t, script, params, noise, box)
    return positions


def displacement_stats(params: MotionParams, n_molecules: int, n_frames: int, frame_rate: float,
                       noise: NoiseField, box: SceneBox, chunk_frames: int = 256) -> float:
    """
    Mean per-frame displacement of context molecules, in scene units.

    Molecules 0..n_molecules-1 are sampled at frames 0..n_frames, and the
    Euclidean step length is averaged over all molecules and all n_frames
    steps. Estimates stabilise from about 100 molecules and 100 frames.
    """
    if n_molecules <= 0 or n_frames <= 0:
        raise ValueError("Displacement statistics need at least one molecule and one frame step")
    if frame_rate <= 0:
        raise ValueError(f"Frame rate must be positive, got {frame_rate}")

    ids = np.arange(n_molecules)
    total = 0.0
    previous = None
    for start in range(0, n_frames + 1, chunk_frames):
        frames = np.arange(start, min(start + chunk_frames, n_frames + 1))
        coords = box.to_scene(context_coordinates(ids, frames / frame_rate, params, noise))
        if previous is not None:
            coords = np.concatenate([previous[None], coords])
        steps = np.linalg.norm(np.diff(coords, axis=0), axis=-1)
        total += float(steps.sum())
        previous = coords[-1]
    return total / (n_molecules * n_frames)
