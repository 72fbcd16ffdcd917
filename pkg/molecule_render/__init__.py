"""
Molecule Render Module

Builds the molecule population and rasterizes it headlessly.

Key Features:
- 8 colour-coded molecule types (Set1 palette) made of 1-8 atom spheres
- Deterministic population and focus-pair selection
- Orthographic sphere-impostor rasterizer with depth resolve and Lambert shading
- Focus-only and masked-context layers for later compositing
- sRGB 8-bit PNG / PPM frame export

Usage:
    from molecule_render import SceneConfig, build_scene, Camera, RenderLayer, render_frame

    population = build_scene(SceneConfig(), seed=7)
    frame = render_frame(population, positions, RenderLayer.FULL, Camera())
"""

from .scene import (
    SET1_PALETTE,
    MoleculeType,
    SceneConfig,
    SceneConfigError,
    ScenePopulation,
    build_scene,
    default_shape_library,
    focus_pair_with_colors,
    molecule_atoms,
)
from .rasterizer import Camera, RenderLayer, blank_frame, rasterize_spheres, render_frame
from .frame_io import (
    FIXED_POINT_SCALE,
    decode_srgb8,
    encode_srgb8,
    frame_hash,
    frame_path,
    list_frames,
    quantize,
    read_frame,
    write_frame,
)

__all__ = [
    'SET1_PALETTE', 'MoleculeType', 'SceneConfig', 'SceneConfigError', 'ScenePopulation',
    'build_scene', 'default_shape_library', 'focus_pair_with_colors', 'molecule_atoms',
    'Camera', 'RenderLayer', 'blank_frame', 'rasterize_spheres', 'render_frame',
    'FIXED_POINT_SCALE', 'decode_srgb8', 'encode_srgb8', 'frame_hash', 'frame_path', 'list_frames', 'quantize',
    'read_frame', 'write_frame',
]
