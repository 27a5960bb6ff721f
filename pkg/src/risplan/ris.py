"""RIS reflection model: orientation alignment, element-count gain, cascaded
channel composition, and the communication/sensing resource split."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import (DeploymentArea, Point2D, RisGainParams, ValidationError,
                       bearing)

__all__ = [
    "ALLOWED_ELEMENT_COUNTS", "RisConfig", "RisGainParams", "alignment_factor",
    "reflection_gain", "isac_weights", "cascaded_gain", "validate_ris",
]

ALLOWED_ELEMENT_COUNTS = (64, 128, 256, 512)


@dataclass(frozen=True)
class RisConfig:
    """One candidate surface deployment: position, facing direction of the
    surface normal, element count, and the communication/sensing split."""

    position: Point2D
    orientation: float
    num_elements: int
    alpha: float


def validate_ris(ris: RisConfig, area: DeploymentArea,
                 allowed_counts=ALLOWED_ELEMENT_COUNTS) -> RisConfig:
    """Check the candidate invariants; return ``ris`` unchanged if valid."""
    p = ris.position
    if not (math.isfinite(p.x) and math.isfinite(p.y)
            and area.x_min <= p.x <= area.x_max and area.y_min <= p.y <= area.y_max):
        raise ValidationError("RisConfig.position: must lie inside the deployment area")
    if not math.isfinite(ris.orientation):
        raise ValidationError("RisConfig.orientation: must be finite")
    if ris.num_elements not in allowed_counts:
        raise ValidationError(
            f"RisConfig.num_elements: must be one of {tuple(allowed_counts)}")
    if not (math.isfinite(ris.alpha) and 0.0 <= ris.alpha <= 1.0):
        raise ValidationError("RisConfig.alpha: must be in [0, 1]")
    return ris


def alignment_factor(ris: RisConfig, node: Point2D) -> float:
    """Cosine alignment between the surface normal and the direction to ``node``.

    Clipped at zero: nodes behind the surface see no reflection.
    """
    angle = bearing(ris.position, node)
    return max(0.0, math.cos(ris.orientation - angle))


def reflection_gain(num_elements: int, params: RisGainParams,
                    c_in: float, c_out: float) -> float:
    """Effective reflection power gain for given in/out alignment factors."""
    if not (0.0 <= c_in <= 1.0 and 0.0 <= c_out <= 1.0):
        raise ValueError("alignment factors must be in [0, 1]")
    return num_elements * params.element_efficiency * (c_in * c_out) ** params.orientation_exponent


def isac_weights(alpha: float) -> tuple[float, float]:
    """Split of reflection resources: (communication weight, sensing weight)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    return alpha, 1.0 - alpha


def cascaded_gain(h_sr, h_rx, gain: float, weight: float):
    """Compose the reflected two-hop channel in the amplitude domain.

    ``gain`` is a power gain, so it enters as sqrt(gain); ``weight`` is the
    resource share allocated to this outgoing path. Accepts scalars or
    per-frame arrays for the two hop channels.
    """
    if not 0.0 <= weight <= 1.0:
        raise ValueError("weight must be in [0, 1]")
    if gain < 0.0:
        raise ValueError("gain must be >= 0")
    return weight * math.sqrt(gain) * np.multiply(h_sr, h_rx)
