import logging
from typing import TYPE_CHECKING, List

from beamformers.adaptive import BEAMFORMER_CLASSES
from beamformers.base_beamformer import BaseBeamformer
from shared_components.exceptions import UnknownAlgorithmError

if TYPE_CHECKING:
    from .scenario_config import ScenarioConfig

logger = logging.getLogger(__name__)

# Registration order is the default order of a scenario's `algorithms` list
ALGORITHM_IDS = tuple(BEAMFORMER_CLASSES)


class AlgorithmManager:
    """🎯 Registry of beamformer classes keyed by algorithm identifier"""

    def __init__(self):
        self.beamformer_classes = dict(BEAMFORMER_CLASSES)

    def list_algorithms(self) -> List[str]:
        return list(self.beamformer_classes)

    def get_class(self, algorithm: str) -> type:
        try:
            return self.beamformer_classes[algorithm]
        except KeyError:
            raise UnknownAlgorithmError(
                f"unknown algorithm '{algorithm}'; expected one of {', '.join(self.beamformer_classes)}"
            ) from None

    def create(self, algorithm: str, config: 'ScenarioConfig', presumed_doa: float) -> BaseBeamformer:
        """Instantiate ``algorithm`` for one trial, pointed at ``presumed_doa``"""
        return self.get_class(algorithm)(config, presumed_doa)
