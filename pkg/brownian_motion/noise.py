"""
Deterministic 1-D value noise.

The noise field is the only source of randomness behind molecular motion:
integer lattice points get a uniform value from a 64-bit integer mixer and
the values in between are blended with a smooth fade kernel. The hash path
is integer-only, so identical (seed, s) pairs give identical values on every
platform.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

KERNELS = ("cubic", "quintic")

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TO_UNIT = 1.0 / float(1 << 53)

ArrayLike = Union[float, np.ndarray]


class NoiseInputError(ValueError):
    """Raised when the noise field is sampled at a non-finite coordinate."""


def _splitmix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer over a uint64 array (wrapping arithmetic)."""
    with np.errstate(over='ignore'):
        z = x + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def _fade_cubic(t: np.ndarray) -> np.ndarray:
    """Hermite smoothstep: 3t^2 - 2t^3."""
    return t * t * (3.0 - 2.0 * t)


def _fade_quintic(t: np.ndarray) -> np.ndarray:
    """Perlin fade function: 6t^5 - 15t^4 + 10t^3."""
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


_FADES = {"cubic": _fade_cubic, "quintic": _fade_quintic}

# Max slope of each fade; noise slope is bounded by this times the largest lattice step (< 1)
FADE_MAX_SLOPE = {"cubic": 1.5, "quintic": 1.875}


@dataclass(frozen=True)
class NoiseField:
    """
    Continuous random noise n(s) with values in [0, 1].

    Args:
        seed: Global determinism seed, folded into every lattice hash
        smoothing_kernel: Lattice interpolant, "cubic" or "quintic"
    """
    seed: int = 0
    smoothing_kernel: str = "quintic"

    def __post_init__(self):
        if self.smoothing_kernel not in KERNELS:
            raise ValueError(f"Unknown smoothing kernel '{self.smoothing_kernel}', expected one of {KERNELS}")
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)

    def hash_lattice_array(self, k: np.ndarray) -> np.ndarray:
        """Uniform [0, 1) value for each integer lattice index in k."""
        k = np.asarray(k, dtype=np.int64)
        mixed = _splitmix64(k.view(np.uint64) ^ np.uint64(self.seed))
        return (mixed >> np.uint64(11)).astype(np.float64) * _TO_UNIT

    def hash_lattice(self, k: int) -> float:
        """Stateless integer-to-uniform hash for a single lattice point."""
        return float(self.hash_lattice_array(np.array([k], dtype=np.int64))[0])

    def sample_array(self, s: np.ndarray) -> np.ndarray:
        """Vectorised sample(); every element must be finite."""
        s = np.asarray(s, dtype=np.float64)
        if not np.all(np.isfinite(s)):
            raise NoiseInputError("Noise field sampled at a non-finite coordinate")

        cell = np.floor(s)
        t = s - cell
        k = cell.astype(np.int64)
        a = self.hash_lattice_array(k)
        b = self.hash_lattice_array(k + 1)
        weight = _FADES[self.smoothing_kernel](t)
        return np.clip(a + weight * (b - a), 0.0, 1.0)

    def sample(self, s: float) -> float:
        """Noise value at coordinate s."""
        if not math.isfinite(s):
            raise NoiseInputError(f"Noise field sampled at non-finite coordinate {s!r}")
        return float(self.sample_array(np.array([s], dtype=np.float64))[0])

    def __call__(self, s: ArrayLike) -> ArrayLike:
        if np.isscalar(s):
            return self.sample(float(s))
        return self.sample_array(s)


def estimate_lipschitz(field: NoiseField, n_samples: int = 1_000_000, delta: float = 1e-4,
                       span: float = 1.0e4, rng_seed: int = 0) -> float:
    """
    Empirical Lipschitz constant of a noise field from dense finite differences.

    Args:
        field: Noise field to sample
        n_samples: Number of random sample coordinates
        delta: Finite-difference step
        span: Probes are drawn uniformly from [-span, span]
        rng_seed: Seed for the sample coordinates

    Returns:
        max |n(s + delta) - n(s)| / delta over all samples
    """
    rng = np.random.default_rng(rng_seed)
    s = rng.uniform(-span, span, size=n_samples)
    diffs = np.abs(field.sample_array(s + delta) - field.sample_array(s))
    return float(diffs.max() / delta)
