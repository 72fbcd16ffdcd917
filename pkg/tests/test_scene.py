import numpy as np
import pytest

from molecule_render.scene import (
    SET1_PALETTE,
    SceneConfig,
    SceneConfigError,
    build_molecule_types,
    build_scene,
    default_shape_library,
    focus_pair_with_colors,
    hex_to_rgb,
    molecule_atoms,
)


def test_default_population():
    population = build_scene(SceneConfig(), seed=42)
    assert population.n_molecules == 1000
    assert len(population.types) == 8
    assert set(population.histogram().values()) == {125}
    a, b = population.focus_pair
    assert population.type_ids[a] != population.type_ids[b]
    assert population.d_mol == pytest.approx(0.22, abs=1e-12)


def test_palette_is_set1():
    types = build_molecule_types(SceneConfig())
    assert tuple(t.color for t in types) == SET1_PALETTE
    assert hex_to_rgb("#E41A1C") == (228, 26, 28)


def test_shape_library_sizes_match():
    for shape in default_shape_library():
        atoms = np.array(shape["atoms"])
        extent = np.max(np.linalg.norm(atoms[:, :3], axis=1) + atoms[:, 3])
        assert 2 * extent == pytest.approx(0.22, abs=1e-12)
        assert 1 <= len(atoms) <= 8


def test_population_is_deterministic():
    assert build_scene(SceneConfig(n_molecules=100), 5) == build_scene(SceneConfig(n_molecules=100), 5)
    assert build_scene(SceneConfig(n_molecules=100), 5).type_ids != build_scene(SceneConfig(n_molecules=100), 6).type_ids


@pytest.mark.parametrize("config", [
    SceneConfig(n_types=1),
    SceneConfig(n_molecules=0),
    SceneConfig(palette=SET1_PALETTE[:4]),
    SceneConfig(palette=("#E41A1C",) * 8),
])
def test_invalid_scenes_rejected(config):
    with pytest.raises(SceneConfigError):
        build_scene(config, seed=1)


def test_mismatched_sizes_rejected():
    shapes = default_shape_library()
    shapes[3] = {"atoms": [[0.0, 0.0, 0.0, 0.5]]}
    with pytest.raises(SceneConfigError):
        build_molecule_types(SceneConfig(shapes=tuple(shapes)))


def test_focus_pair_with_colors():
    population = build_scene(SceneConfig(), seed=3)
    a, b = focus_pair_with_colors(population, ["#E41A1C", "#4DAF4A"], seed=3)
    assert population.type_of(a).color == "#E41A1C"
    assert population.type_of(b).color == "#4DAF4A"
    with pytest.raises(SceneConfigError):
        focus_pair_with_colors(population, ["#000000", "#4DAF4A"], seed=3)


def test_molecule_atoms_expand_offsets():
    population = build_scene(SceneConfig(n_molecules=16), seed=0)
    positions = np.arange(48, dtype=np.float64).reshape(16, 3)
    centers, radii, type_ids, owners = molecule_atoms(population, positions)
    expected_atoms = sum(len(population.type_of(m).atoms) for m in range(16))
    assert centers.shape == (expected_atoms, 3)
    assert radii.shape == type_ids.shape == owners.shape == (expected_atoms,)
    for m in range(16):
        mine = owners == m
        assert np.allclose(centers[mine], positions[m] + population.type_of(m).offsets)
        assert np.all(type_ids[mine] == population.type_ids[m])

    empty = molecule_atoms(population, positions, np.array([], dtype=np.int64))
    assert empty[0].shape == (0, 3)
