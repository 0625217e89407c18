import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from array_model.geometry import ArrayGeometry, steering_vector
from shared_components.exceptions import InvalidGeometryError

logger = logging.getLogger(__name__)


@dataclass
class SteeringBank:
    """🎯 Assumed steering vector ā plus D−1 perturbed candidates a_d"""
    assumed: np.ndarray
    candidates: List[np.ndarray]
    perturbation_degrees: float
    doas_degrees: List[float] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.candidates)

    def alpha_differences(self) -> List[np.ndarray]:
        """α_d = a_d − ā for every candidate (α_0 is zero)"""
        return [a_d - self.assumed for a_d in self.candidates]


def candidate_doas(a_bar_doa: float, d: int, delta_deg: float) -> List[float]:
    """ā, ā+Δ, ā−Δ, ā+2Δ, ā−2Δ, …"""
    doas = [float(a_bar_doa)]
    for k in range(1, d):
        sign = 1.0 if k % 2 else -1.0
        doas.append(float(a_bar_doa) + sign * math.ceil(k / 2) * delta_deg)
    return doas


def build_steering_bank(a_bar_doa: float, geometry: ArrayGeometry, d: int, delta_deg: float) -> SteeringBank:
    """Steering vectors at the presumed DoA and its alternating perturbations"""

    if d < 1:
        raise ValueError(f"rank must be at least 1, got {d}")
    doas = candidate_doas(a_bar_doa, d, delta_deg)
    outside = [doa for doa in doas if not 0 < doa < 180]
    if outside:
        raise InvalidGeometryError(f"perturbed DoA(s) {outside} leave (0, 180) degrees")
    candidates = [steering_vector(geometry, doa) for doa in doas]
    return SteeringBank(
        assumed=candidates[0],
        candidates=candidates,
        perturbation_degrees=delta_deg,
        doas_degrees=doas,
    )
