"""
Brownian Motion Module

Procedural molecular motion driven by a deterministic noise field.

Key Features:
- 1-D value noise with an integer-only lattice hash (reproducible everywhere)
- Nested-noise context trajectories with a geometric smoothing factor tau
- Scripted attraction, bond and repulsion phases for the two reactants
- Monte Carlo estimate of the mean per-frame displacement

Usage:
    from brownian_motion import NoiseField, MotionParams, context_positions

    noise = NoiseField(seed=42)
    positions = context_positions(ids, t, MotionParams(v=0.1, tau=1.0), noise, box)
"""

from .noise import NoiseField, NoiseInputError, estimate_lipschitz
from .motion import (
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

__all__ = [
    'NoiseField', 'NoiseInputError', 'estimate_lipschitz',
    'MotionParams', 'ReactionContractError', 'ReactionScript', 'SceneBox',
    'context_coordinates', 'context_position', 'context_positions', 'displacement_stats',
    'focus_position', 'focus_positions', 'is_focus_time', 'molecule_positions',
    'reaction_phase', 'seed_offset',
]
