"""Synthetic narrowband snapshots x = Σ a(θ_k)·s_k + n."""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence, Union

import numpy as np

from .geometry import steering_matrix

if TYPE_CHECKING:
    from core_system.scenario_config import ScenarioConfig

logger = logging.getLogger(__name__)


@dataclass
class Snapshot:
    """One complex M-vector of sensor data x[i]"""
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        if not np.all(np.isfinite(self.data)):
            raise ValueError("Snapshot contains non-finite entries")


SnapshotLike = Union[Snapshot, np.ndarray]


def as_vector(x: SnapshotLike) -> np.ndarray:
    """Unwrap a Snapshot (or pass an array through) as a complex vector"""
    if isinstance(x, Snapshot):
        return x.data
    return np.asarray(x, dtype=complex)


def circular_gaussian(rng: np.random.Generator, size, power: float = 1.0) -> np.ndarray:
    """Zero-mean circular complex Gaussian samples with E|s|² = power"""
    scale = np.sqrt(power / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


class SnapshotGenerator:
    """🎲 Draws snapshots for one scenario, caching the true steering matrix"""

    def __init__(self, scenario: 'ScenarioConfig'):
        self.steering = steering_matrix(scenario.geometry, [s.doa_degrees for s in scenario.sources])
        self.source_powers = scenario.source_powers()
        self.noise_power = scenario.noise_power
        self.num_sensors = scenario.geometry.num_sensors

    def draw(self, rng: np.random.Generator, symbols: Optional[Sequence[complex]] = None) -> Snapshot:
        """Draw one snapshot; ``symbols`` replaces the random source symbols"""

        if symbols is None:
            s = circular_gaussian(rng, len(self.source_powers)) * np.sqrt(self.source_powers)
        else:
            s = np.asarray(symbols, dtype=complex)
        x = self.steering @ s
        if self.noise_power > 0:
            x = x + circular_gaussian(rng, self.num_sensors, self.noise_power)
        return Snapshot(x)


def generate_snapshot(scenario: 'ScenarioConfig', rng: np.random.Generator,
                      symbols: Optional[Sequence[complex]] = None) -> Snapshot:
    """Draw a single snapshot for ``scenario`` from ``rng``"""
    return SnapshotGenerator(scenario).draw(rng, symbols)
