"""
Perceived-speed regressions and speed compensation.

Speeds are percentages of the study's speed range: level 1 is 0 %, the
fastest level 100 %. Each model predicts the estimated speed es from the
ground-truth speed s as es = intercept + slope * s.
"""

import math
from dataclasses import dataclass
from typing import Dict, Sequence


class SpeedRangeError(ValueError):
    """Raised for speed percentages outside the modelled range."""


@dataclass(frozen=True)
class SpeedModel:
    mode: str
    intercept: float
    slope: float


SPEED_MODELS: Dict[str, SpeedModel] = {
    "baseline": SpeedModel("baseline", 30.4, 0.6),
    "gms": SpeedModel("gms", 19.3, 0.6),
    "vms_trail2": SpeedModel("vms_trail2", 29.8, 0.4),
}

# CLI spelling
MODEL_ALIASES = {"baseline": "baseline", "gms": "gms", "vms2": "vms_trail2", "vms_trail2": "vms_trail2"}


def get_model(name: str) -> SpeedModel:
    """Look up a model by name or CLI alias."""
    if name not in MODEL_ALIASES:
        raise ValueError(f"Unknown speed model '{name}', expected one of {sorted(MODEL_ALIASES)}")
    return SPEED_MODELS[MODEL_ALIASES[name]]


def _check_percent(s: float, extrapolate: bool) -> None:
    if not math.isfinite(s) or s < 0 or (s > 100 and not extrapolate):
        raise SpeedRangeError(f"Speed must be a percentage in [0, 100], got {s}")


def estimated_speed(s: float, model: SpeedModel, extrapolate: bool = False) -> float:
    """
    Estimated speed for ground-truth speed s under a model.

    Args:
        s: Ground-truth speed in percent
        model: Regression model
        extrapolate: Accept s > 100 (compensated speeds leave the studied range)
    """
    _check_percent(s, extrapolate)
    return model.intercept + model.slope * s


def compensate_speed(s: float) -> float:
    """Speed that makes trail-2 motion blur look as fast as the unblurred baseline: 1.5 (s + 1)."""
    _check_percent(s, extrapolate=False)
    return 1.5 * (s + 1.0)


def compensated_speed(s: float, model: str = "vms_trail2", reference: str = "baseline") -> float:
    """
    Ground-truth speed under `model` whose estimate matches `reference` at s.

    For vms_trail2 this equals compensate_speed(s); for gms it is s + 18.5.
    """
    if get_model(model).mode == "vms_trail2" and get_model(reference).mode == "baseline":
        return compensate_speed(s)
    _check_percent(s, extrapolate=False)
    target, ref = get_model(model), get_model(reference)
    return (ref.intercept - target.intercept + ref.slope * s) / target.slope


def speed_percent(level: int, n_levels: int = 4) -> float:
    """Percent position of a speed level: level 1 -> 0, level n_levels -> 100."""
    if not 1 <= level <= n_levels:
        raise SpeedRangeError(f"Speed level must lie in 1..{n_levels}, got {level}")
    return 100.0 * (level - 1) / (n_levels - 1)


def speed_for_percent(s: float, speed_levels: Sequence[float]) -> float:
    """Ground-truth v for a percentage, linear between the slowest and fastest level (extrapolates above 100)."""
    if not math.isfinite(s) or s < 0:
        raise SpeedRangeError(f"Speed percentage must be non-negative, got {s}")
    return speed_levels[0] + (speed_levels[-1] - speed_levels[0]) * s / 100.0
