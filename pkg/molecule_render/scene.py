"""
Scene population: molecule types, their atom clusters and the focus pair.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from brownian_motion.motion import SceneBox

# 8-class Set1 (ColorBrewer), sRGB
SET1_PALETTE = ("#E41A1C", "#377EB8", "#4DAF4A", "#984EA3", "#FF7F00", "#FFFF33", "#A65628", "#F781BF")

SIZE_TOLERANCE = 0.15


class SceneConfigError(ValueError):
    """Raised for an unusable scene configuration."""


def hex_to_rgb(color: str) -> Tuple[int, int, int]:
    """'#RRGGBB' -> (r, g, b) in 0..255."""
    value = color.lstrip('#')
    if len(value) != 6:
        raise SceneConfigError(f"Colour must be #RRGGBB, got '{color}'")
    return tuple(int(value[i:i + 2], 16) for i in (0, 2, 4))


@dataclass(frozen=True)
class MoleculeType:
    """A colour-coded rigid cluster of 1-8 atom spheres, offsets relative to the molecule centre."""
    type_id: int
    color: str
    atoms: Tuple[Tuple[Tuple[float, float, float], float], ...]

    def __post_init__(self):
        if not 1 <= len(self.atoms) <= 8:
            raise SceneConfigError(f"Molecule type {self.type_id} must have 1-8 atoms, got {len(self.atoms)}")
        for offset, radius in self.atoms:
            if len(offset) != 3 or radius <= 0:
                raise SceneConfigError(f"Molecule type {self.type_id} has an invalid atom {offset}, {radius}")
        hex_to_rgb(self.color)

    @property
    def offsets(self) -> np.ndarray:
        return np.array([offset for offset, _ in self.atoms], dtype=np.float64)

    @property
    def radii(self) -> np.ndarray:
        return np.array([radius for _, radius in self.atoms], dtype=np.float64)

    @property
    def bounding_diameter(self) -> float:
        """Diameter of the bounding sphere centred on the molecule origin."""
        return float(2.0 * np.max(np.linalg.norm(self.offsets, axis=1) + self.radii))


def _shell(count: int, distance: float) -> List[Tuple[float, float, float]]:
    """Offsets of simple symmetric atom arrangements."""
    d = distance
    if count == 1:
        return [(0.0, 0.0, 0.0)]
    if count == 2:
        return [(d, 0.0, 0.0), (-d, 0.0, 0.0)]
    if count == 3:
        return [(d * np.cos(a), d * np.sin(a), 0.0) for a in np.arange(3) * 2 * np.pi / 3]
    if count == 4:
        s = d / np.sqrt(3.0)
        return [(s, s, s), (s, -s, -s), (-s, s, -s), (-s, -s, s)]
    if count == 6:
        return [(d, 0, 0), (-d, 0, 0), (0, d, 0), (0, -d, 0), (0, 0, d), (0, 0, -d)]
    if count == 8:
        s = d / np.sqrt(3.0)
        return [(sx * s, sy * s, sz * s) for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)]
    return [(d * np.cos(a), d * np.sin(a), 0.0) for a in np.arange(count) * 2 * np.pi / count]


def default_shape_library(diameter: float = 0.22) -> List[dict]:
    """
    Built-in atom layouts for 8 molecule types, all with bounding diameter `diameter`.

    Returns:
        List of {"atoms": [[x, y, z, r], ...]} entries in type order
    """
    R = diameter / 2.0
    layouts = [
        [(o, R) for o in _shell(1, 0.0)],
        [(o, R / 2) for o in _shell(2, R / 2)],
        [(o, 0.45 * R) for o in _shell(3, 0.55 * R)],
        [(o, 0.41 * R) for o in _shell(4, 0.59 * R)],
        [((0.0, 0.0, 0.0), 0.45 * R)] + [(o, 0.36 * R) for o in _shell(4, 0.64 * R)],
        [(o, 0.36 * R) for o in _shell(6, 0.64 * R)],
        [((0.0, 0.0, 0.0), 0.36 * R)] + [(o, 0.32 * R) for o in _shell(6, 0.68 * R)],
        [(o, 0.36 * R) for o in _shell(8, 0.64 * R)],
    ]
    return [{"atoms": [[float(x), float(y), float(z), float(r)] for (x, y, z), r in atoms]} for atoms in layouts]


@dataclass(frozen=True)
class SceneConfig:
    """Population settings (the `scene` section of the stimulus config)."""
    n_molecules: int = 1000
    box: SceneBox = field(default_factory=SceneBox)
    palette: Tuple[str, ...] = SET1_PALETTE
    shapes: Tuple[dict, ...] = tuple(default_shape_library())
    n_types: Optional[int] = None

    def __post_init__(self):
        # unset means one type per library shape
        if self.n_types is None:
            object.__setattr__(self, "n_types", len(self.shapes))

    @property
    def type_count(self) -> int:
        return self.n_types


@dataclass(frozen=True)
class ScenePopulation:
    """Immutable molecule population of one stimulus."""
    types: Tuple[MoleculeType, ...]
    type_ids: Tuple[int, ...]
    focus_pair: Tuple[int, int]
    box: SceneBox
    d_mol: float

    @property
    def n_molecules(self) -> int:
        return len(self.type_ids)

    @property
    def molecules(self) -> List[Tuple[int, int]]:
        """(molecule_id, type_id) pairs."""
        return list(enumerate(self.type_ids))

    def type_of(self, molecule_id: int) -> MoleculeType:
        return self.types[self.type_ids[molecule_id]]

    def histogram(self) -> Dict[int, int]:
        counts = np.bincount(np.asarray(self.type_ids), minlength=len(self.types))
        return {type_id: int(count) for type_id, count in enumerate(counts)}

    def focus_colors(self) -> Tuple[str, str]:
        return tuple(self.type_of(m).color for m in self.focus_pair)


def build_molecule_types(config: SceneConfig) -> Tuple[MoleculeType, ...]:
    """Instantiate the configured molecule types and check their palette and sizes."""
    n_types = config.type_count
    if n_types < 2:
        raise SceneConfigError(f"A scene needs at least 2 molecule types, got {n_types}")
    if n_types > len(config.shapes):
        raise SceneConfigError(f"Shape library defines {len(config.shapes)} types, {n_types} requested")
    if n_types > len(config.palette):
        raise SceneConfigError(f"Palette has {len(config.palette)} colours, {n_types} types requested")
    if len({c.upper() for c in config.palette[:n_types]}) != n_types:
        raise SceneConfigError("Molecule type colours must be distinct")

    types = []
    for type_id in range(n_types):
        atoms = tuple(((float(x), float(y), float(z)), float(r)) for x, y, z, r in config.shapes[type_id]["atoms"])
        types.append(MoleculeType(type_id=type_id, color=config.palette[type_id], atoms=atoms))

    diameters = np.array([t.bounding_diameter for t in types])
    d_mol = float(diameters.mean())
    if np.any(np.abs(diameters - d_mol) > SIZE_TOLERANCE * d_mol):
        raise SceneConfigError(f"Molecule sizes must be within {SIZE_TOLERANCE:.0%} of their mean, got {diameters}")
    return tuple(types)


def build_scene(config: SceneConfig, seed: int) -> ScenePopulation:
    """
    Build a deterministic population.

    Types are assigned round-robin and then shuffled with the seed; the focus
    pair is one molecule from each of two distinct, randomly chosen types.
    """
    if config.n_molecules <= 0:
        raise SceneConfigError("A scene needs at least one molecule")
    types = build_molecule_types(config)
    if config.n_molecules < 2:
        raise SceneConfigError("A scene needs at least two molecules to stage a reaction")

    rng = np.random.default_rng(seed)
    type_ids = np.arange(config.n_molecules) % len(types)
    rng.shuffle(type_ids)

    present = np.unique(type_ids[:config.n_molecules])
    type_a, type_b = rng.choice(present, size=2, replace=False)
    partner_a = int(rng.choice(np.flatnonzero(type_ids == type_a)))
    partner_b = int(rng.choice(np.flatnonzero(type_ids == type_b)))

    d_mol = float(np.mean([t.bounding_diameter for t in types]))
    return ScenePopulation(
        types=types,
        type_ids=tuple(int(t) for t in type_ids),
        focus_pair=(partner_a, partner_b),
        box=config.box,
        d_mol=d_mol,
    )


def focus_pair_with_colors(population: ScenePopulation, colors: Sequence[str], seed: int) -> Tuple[int, int]:
    """Pick a focus pair whose types have the given colours (e.g. red and green for a test run)."""
    rng = np.random.default_rng(seed)
    pair = []
    for color in colors:
        matches = [t.type_id for t in population.types if t.color.upper() == color.upper()]
        if not matches:
            raise SceneConfigError(f"No molecule type has colour {color}")
        candidates = np.flatnonzero(np.asarray(population.type_ids) == matches[0])
        if candidates.size == 0:
            raise SceneConfigError(f"No molecule of colour {color} in the population")
        pair.append(int(rng.choice(candidates)))
    if pair[0] == pair[1]:
        raise SceneConfigError("Focus colours must belong to different types")
    return pair[0], pair[1]


def molecule_atoms(population: ScenePopulation, positions: np.ndarray,
                   molecule_ids: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Expand molecule centres into atom spheres.

    Args:
        population: Scene population
        positions: Scene-space centres of all molecules, shape (n_molecules, 3)
        molecule_ids: Subset of molecules to expand (default: all)

    Returns:
        (centers (A, 3), radii (A,), type ids (A,), owning molecule ids (A,))
    """
    if molecule_ids is None:
        molecule_ids = np.arange(population.n_molecules)
    molecule_ids = np.asarray(molecule_ids, dtype=np.int64)
    if molecule_ids.size == 0:
        empty = np.zeros((0,), dtype=np.float64)
        return np.zeros((0, 3)), empty, np.zeros((0,), dtype=np.int64), np.zeros((0,), dtype=np.int64)

    type_ids = np.asarray(population.type_ids, dtype=np.int64)[molecule_ids]
    centers, radii, atom_types, owners = [], [], [], []
    for molecule_type in population.types:
        members = molecule_ids[type_ids == molecule_type.type_id]
        if members.size == 0:
            continue
        centers.append((positions[members][:, None, :] + molecule_type.offsets[None, :, :]).reshape(-1, 3))
        radii.append(np.tile(molecule_type.radii, members.size))
        atom_types.append(np.full(members.size * len(molecule_type.atoms), molecule_type.type_id, dtype=np.int64))
        owners.append(np.repeat(members, len(molecule_type.atoms)))
    return np.concatenate(centers), np.concatenate(radii), np.concatenate(atom_types), np.concatenate(owners)
