"""
Headless sphere-impostor rasterizer.

Every atom is drawn as an analytically shaded sphere: a per-pixel circle
test around the projected centre, front depth from the sphere equation and
Lambert shading from one directional light. Fragments of all atoms are
resolved with a stable sort on (pixel, depth), so the nearest atom wins and
the result does not depend on evaluation order or thread count.

Frames are float32 RGB arrays in linear light, quantized to multiples of
2^-24 so that temporal averaging can be carried out exactly in integers.
"""

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from brownian_motion.motion import SceneBox
from .frame_io import quantize, srgb_to_linear
from .scene import ScenePopulation, hex_to_rgb, molecule_atoms

class RenderLayer(enum.Enum):
    """Which molecules a pass draws and how."""
    FOCUS_ONLY = "focus"
    CONTEXT_WITH_FOCUS_MASK = "context"
    FULL = "full"


@dataclass(frozen=True)
class Camera:
    """
    Orthographic camera looking down -z onto the scene box.

    The box is scaled uniformly to fit the viewport and centred, so every
    box position projects inside the image.
    """
    width: int = 1024
    height: int = 576
    box: SceneBox = field(default_factory=SceneBox)
    background: Tuple[float, float, float] = (0.004, 0.004, 0.006)
    light_direction: Tuple[float, float, float] = (-0.4, 0.5, 0.77)
    ambient: float = 0.2
    diffuse: float = 0.8

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"Viewport must be positive, got {self.width}x{self.height}")
        if self.ambient < 0 or self.diffuse < 0 or self.ambient + self.diffuse > 1.0:
            raise ValueError("Ambient and diffuse weights must be non-negative and sum to at most 1")
        if not all(0.0 <= c <= 1.0 for c in self.background):
            raise ValueError(f"Background must be linear RGB in [0, 1], got {self.background}")

    @property
    def scale(self) -> float:
        """Pixels per scene unit."""
        return min(self.width / self.box.size[0], self.height / self.box.size[1])

    @property
    def margin(self) -> Tuple[float, float]:
        return ((self.width - self.box.size[0] * self.scale) / 2.0,
                (self.height - self.box.size[1] * self.scale) / 2.0)

    def project(self, points: np.ndarray) -> np.ndarray:
        """Scene points (N, 3) -> continuous pixel coordinates (N, 2), y pointing down."""
        points = np.asarray(points, dtype=np.float64)
        origin = np.asarray(self.box.origin)
        mx, my = self.margin
        px = (points[:, 0] - origin[0]) * self.scale + mx
        py = self.height - ((points[:, 1] - origin[1]) * self.scale + my)
        return np.stack([px, py], axis=1)

    @property
    def light(self) -> np.ndarray:
        direction = np.asarray(self.light_direction, dtype=np.float64)
        return direction / np.linalg.norm(direction)


def blank_frame(camera: Camera, color: Sequence[float] = (0.0, 0.0, 0.0)) -> np.ndarray:
    """Uniform frame of the given linear colour."""
    frame = np.empty((camera.height, camera.width, 3), dtype=np.float64)
    frame[:] = np.asarray(color, dtype=np.float64)
    return quantize(frame)


def rasterize_spheres(camera: Camera, centers: np.ndarray, radii: np.ndarray, colors: np.ndarray,
                      background: Sequence[float], shaded: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Depth-buffered sphere impostors.

    Args:
        camera: Orthographic camera
        centers: Scene-space sphere centres, shape (A, 3)
        radii: Scene-space radii, shape (A,)
        colors: Linear base colours, shape (A, 3)
        background: Linear background colour
        shaded: Optional boolean mask (A,); unshaded spheres keep their flat colour
            (used for black masking)

    Returns:
        Quantized float32 frame of shape (height, width, 3)
    """
    height, width = camera.height, camera.width
    frame = np.empty((height * width, 3), dtype=np.float64)
    frame[:] = np.asarray(background, dtype=np.float64)
    if len(centers) == 0:
        return quantize(frame.reshape(height, width, 3))

    if shaded is None:
        shaded = np.ones(len(centers), dtype=bool)
    projected = camera.project(centers)
    pixel_radii = np.asarray(radii, dtype=np.float64) * camera.scale
    reach = np.ceil(pixel_radii).astype(np.int64) + 1
    light = camera.light

    pixels, depths, shades = [], [], []
    # Atoms are grouped by stencil size so each group is one dense array operation
    for k in np.unique(reach):
        members = np.flatnonzero(reach == k)
        span = np.arange(-k, k + 1)
        dy, dx = np.meshgrid(span, span, indexing='ij')
        dx, dy = dx.ravel(), dy.ravel()

        cx, cy = projected[members, 0], projected[members, 1]
        px = np.floor(cx).astype(np.int64)[:, None] + dx[None, :]
        py = np.floor(cy).astype(np.int64)[:, None] + dy[None, :]
        ox = px + 0.5 - cx[:, None]
        oy = py + 0.5 - cy[:, None]
        rp = pixel_radii[members][:, None]
        d2 = ox * ox + oy * oy
        inside = (d2 <= rp * rp) & (px >= 0) & (px < width) & (py >= 0) & (py < height)
        if not inside.any():
            continue

        rows, cols = np.nonzero(inside)
        atom = members[rows]
        r = pixel_radii[atom]
        h = np.sqrt(np.maximum(r * r - d2[rows, cols], 0.0))
        nx, ny, nz = ox[rows, cols] / r, -oy[rows, cols] / r, h / r
        lambert = np.maximum(nx * light[0] + ny * light[1] + nz * light[2], 0.0)
        intensity = np.where(shaded[atom], camera.ambient + camera.diffuse * lambert, 1.0)

        pixels.append(py[rows, cols] * width + px[rows, cols])
        depths.append(centers[atom, 2] + h / camera.scale)
        shades.append(colors[atom] * intensity[:, None])

    if pixels:
        pixel = np.concatenate(pixels)
        depth = np.concatenate(depths)
        shade = np.concatenate(shades)
        order = np.lexsort((-depth, pixel))
        pixel, shade = pixel[order], shade[order]
        nearest = np.ones(pixel.size, dtype=bool)
        nearest[1:] = pixel[1:] != pixel[:-1]
        frame[pixel[nearest]] = shade[nearest]

    return quantize(frame.reshape(height, width, 3))


def palette_linear(population: ScenePopulation) -> np.ndarray:
    """Linear-light base colour of every molecule type, shape (T, 3)."""
    srgb = np.array([hex_to_rgb(t.color) for t in population.types], dtype=np.float64) / 255.0
    return srgb_to_linear(srgb)


def render_frame(population: ScenePopulation, positions: np.ndarray, layer: RenderLayer, camera: Camera,
                 focus_ids: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Render one layer of one frame.

    Args:
        population: Scene population
        positions: Scene-space centre of every molecule, shape (n_molecules, 3)
        layer: FOCUS_ONLY draws the focus molecules over black;
            CONTEXT_WITH_FOCUS_MASK draws everything with the focus molecules
            as depth-writing black; FULL is the plain single-pass render
        camera: Camera and shading settings
        focus_ids: Molecules treated as focus (default: the population's focus pair)

    Returns:
        Quantized float32 frame (height, width, 3)
    """
    positions = np.asarray(positions, dtype=np.float64)
    if positions.shape != (population.n_molecules, 3):
        raise ValueError(f"Expected positions of shape {(population.n_molecules, 3)}, got {positions.shape}")
    focus = np.asarray(population.focus_pair if focus_ids is None else focus_ids, dtype=np.int64)

    if layer is RenderLayer.FOCUS_ONLY:
        molecule_ids = focus
        background = (0.0, 0.0, 0.0)
    else:
        molecule_ids = np.arange(population.n_molecules)
        background = camera.background

    centers, radii, type_ids, owners = molecule_atoms(population, positions, molecule_ids)
    colors = palette_linear(population)[type_ids] if len(type_ids) else np.zeros((0, 3))
    shaded = np.ones(len(owners), dtype=bool)
    if layer is RenderLayer.CONTEXT_WITH_FOCUS_MASK and focus.size:
        masked = np.isin(owners, focus)
        colors = np.where(masked[:, None], 0.0, colors)
        shaded = ~masked
    return rasterize_spheres(camera, centers, radii, colors, background, shaded)
