"""Output and optimal SINR against the analytic (true) covariances."""

import logging
from typing import TYPE_CHECKING, Tuple

import numpy as np
from scipy import linalg

from shared_components.exceptions import DegenerateInputError

from .geometry import steering_vector

if TYPE_CHECKING:
    from core_system.scenario_config import ScenarioConfig

logger = logging.getLogger(__name__)

SINR_FLOOR_DB = -300.0


def analytic_covariances(scenario: 'ScenarioConfig') -> Tuple[np.ndarray, np.ndarray]:
    """Return (R_k, R_{i+n}): SoI covariance and interference-plus-noise covariance"""

    m = scenario.geometry.num_sensors
    powers = scenario.source_powers()
    r_soi = np.zeros((m, m), dtype=complex)
    r_in = scenario.noise_power * np.eye(m, dtype=complex)
    for source, power in zip(scenario.sources, powers):
        a = steering_vector(scenario.geometry, source.doa_degrees)
        outer = power * np.outer(a, a.conj())
        if source.is_soi:
            r_soi += outer
        else:
            r_in += outer
    return r_soi, r_in


def _to_db(ratio: float) -> float:
    if ratio <= 0:
        return SINR_FLOOR_DB
    return max(10.0 * np.log10(ratio), SINR_FLOOR_DB)


class SinrEvaluator:
    """📈 Scores weight vectors against one scenario's analytic covariances"""

    def __init__(self, scenario: 'ScenarioConfig'):
        self.r_soi, self.r_in = analytic_covariances(scenario)
        soi = scenario.soi
        self.soi_power = scenario.soi_power()
        self.soi_steering = steering_vector(scenario.geometry, soi.doa_degrees)

    def output_sinr(self, weights: np.ndarray) -> float:
        weights = np.asarray(weights, dtype=complex)
        numerator = np.real(np.vdot(weights, self.r_soi @ weights))
        denominator = np.real(np.vdot(weights, self.r_in @ weights))
        if denominator <= 0:
            raise DegenerateInputError("weights give zero interference-plus-noise power")
        return _to_db(numerator / denominator)

    def optimal_weights(self) -> np.ndarray:
        """R_{i+n}⁻¹·a_s (any nonzero scaling is SINR-equivalent)"""
        return linalg.solve(self.r_in, self.soi_steering, assume_a='her')

    def optimal_sinr(self) -> float:
        w = self.optimal_weights()
        return _to_db(self.soi_power * np.real(np.vdot(self.soi_steering, w)))


def output_sinr(weights: np.ndarray, scenario: 'ScenarioConfig') -> float:
    """10·log10(ωᴴR_kω / ωᴴR_{i+n}ω), floored at -300 dB"""
    return SinrEvaluator(scenario).output_sinr(weights)


def optimal_sinr(scenario: 'ScenarioConfig') -> float:
    """10·log10(σ_s²·a_sᴴR_{i+n}⁻¹a_s)"""
    return SinrEvaluator(scenario).optimal_sinr()
