from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any, Dict
import logging

import numpy as np

from array_model.geometry import steering_vector
from array_model.snapshots import SnapshotLike

if TYPE_CHECKING:
    from core_system.scenario_config import ScenarioConfig

logger = logging.getLogger(__name__)


class BaseBeamformer(ABC):
    """🎯 Base class for the stateful beamformers driven by the Monte Carlo harness"""

    algorithm_id: str = ''
    reduced_rank: bool = False

    def __init__(self, config: 'ScenarioConfig', presumed_doa: float):
        self.config = config
        self.presumed_doa = float(presumed_doa)
        self.a_bar = steering_vector(config.geometry, presumed_doa)
        self.num_sensors = config.geometry.num_sensors

        self.usage_stats = {
            'snapshots_processed': 0,
        }

        logger.debug(f"{self.__class__.__name__} initialized (M={self.num_sensors}, "
                     f"presumed DoA {self.presumed_doa:.4f} deg)")

    @abstractmethod
    def step(self, x: SnapshotLike) -> None:
        """Advance the adaptive state by one snapshot"""
        pass

    @abstractmethod
    def full_weights(self) -> np.ndarray:
        """Current M-dimensional weight vector (S_D·ω for reduced-rank filters)"""
        pass

    def process(self, x: SnapshotLike) -> np.ndarray:
        """Step on ``x`` and return the full-dimension weights"""
        self.step(x)
        self.usage_stats['snapshots_processed'] += 1
        return self.full_weights()

    def get_statistics(self) -> Dict[str, Any]:
        """📊 Usage statistics"""
        return {
            'algorithm': self.algorithm_id,
            'class': self.__class__.__name__,
            'reduced_rank': self.reduced_rank,
            'snapshots_processed': self.usage_stats['snapshots_processed'],
        }
