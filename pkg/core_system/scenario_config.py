import hashlib
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from array_model.geometry import ArrayGeometry, SourceSpec
from shared_components.exceptions import ScenarioParseError, ScenarioValidationError

from .algorithm_manager import ALGORITHM_IDS

logger = logging.getLogger(__name__)

DEFAULT_SCENARIO_DIR = Path(__file__).resolve().parent.parent / 'scenarios'

# Fraction of ||a_bar||^2 the full-rank robust Capon radius defaults to when
# the reduced-rank epsilon is not feasible at full dimension.
FULLRANK_EPSILON_FRACTION = 0.5


class ScenarioConfig(BaseModel):
    """🧪 Full experiment description: geometry, sources, protocol and hyperparameters"""

    model_config = ConfigDict(extra='forbid')

    name: str = 'custom'
    description: str = ''
    geometry: ArrayGeometry
    sources: List[SourceSpec] = Field(min_length=1)
    snr_db: Optional[float] = None
    noise_power: float = Field(default=1.0, ge=0)
    mismatch_max_degrees: float = Field(default=0.0, ge=0)
    rank: int = Field(default=2, ge=1)
    snapshots: int = Field(default=120, ge=1)
    runs: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)
    forgetting: float = Field(default=0.998, gt=0, le=1)
    delta: Optional[float] = Field(default=None, gt=0)
    epsilon: float = Field(default=140.0, gt=0)
    fullrank_epsilon: Optional[float] = Field(default=None, gt=0)
    mu_w: float = Field(default=0.005, gt=0)
    mu_s: float = Field(default=0.005, gt=0)
    mu_a: float = Field(default=0.01, gt=0)
    perturbation_degrees: float = Field(default=1.0, ge=0)
    # Diagonal loading of the MJIO column covariance, per snapshot and in source power units
    column_loading: float = Field(default=100.0, ge=0)
    rcb_column_rule: Literal['mjio', 'capon'] = 'mjio'
    gram_schmidt: bool = False
    algorithms: List[str] = Field(default_factory=lambda: list(ALGORITHM_IDS))
    workers: int = Field(default=1, ge=1)
    common_random_numbers: bool = True

    @field_validator('algorithms')
    @classmethod
    def _known_algorithms(cls, value: List[str]) -> List[str]:
        unknown = [a for a in value if a not in ALGORITHM_IDS]
        if unknown:
            raise ValueError(f"unknown algorithm(s) {unknown}; expected a subset of {list(ALGORITHM_IDS)}")
        if not value:
            raise ValueError("at least one algorithm is required")
        return list(dict.fromkeys(value))

    @model_validator(mode='after')
    def _check_invariants(self) -> 'ScenarioConfig':
        soi_count = sum(1 for s in self.sources if s.is_soi)
        if soi_count != 1:
            raise ValueError(f"exactly one source must have is_soi = true (found {soi_count})")
        m = self.geometry.num_sensors
        if self.rank > m:
            raise ValueError(f"rank {self.rank} exceeds num_sensors {m}")
        soi = self.soi
        if self.snr_db is None:
            self.snr_db = soi.power_db
        elif not np.isclose(self.snr_db, soi.power_db):
            raise ValueError(f"snr_db {self.snr_db} disagrees with the SoI power_db {soi.power_db}")
        if self.delta is None:
            self.delta = 100.0 / m
        if self.fullrank_epsilon is None:
            self.fullrank_epsilon = min(self.epsilon, FULLRANK_EPSILON_FRACTION * m)
        return self

    @property
    def soi(self) -> SourceSpec:
        return next(s for s in self.sources if s.is_soi)

    def soi_power(self) -> float:
        return float(10.0 ** (self.snr_db / 10.0))

    def source_powers(self) -> np.ndarray:
        """Linear powers in ``sources`` order; interferers are relative to the SoI"""
        base = self.soi_power()
        return np.array([
            base if s.is_soi else base * 10.0 ** (s.power_db / 10.0)
            for s in self.sources
        ])

    def scenario_hash(self) -> str:
        return hashlib.sha256(self.model_dump_json().encode('utf-8')).hexdigest()[:16]

    def with_overrides(self, **overrides: Any) -> 'ScenarioConfig':
        """Re-validate with CLI-style overrides (None values are ignored)"""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return build_scenario(data, source=f"{self.name} (overrides)")


def _format_validation_error(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = '.'.join(str(p) for p in item['loc']) or '<root>'
        parts.append(f"{location}: {item['msg']}")
    return '; '.join(parts)


def build_scenario(data: Dict[str, Any], source: str = '<memory>') -> ScenarioConfig:
    """Validate a mapping into a ScenarioConfig, raising ScenarioValidationError"""
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ScenarioValidationError(f"{source}: {_format_validation_error(e)}") from e


def parse_scenario_text(text: str, source: str = '<memory>') -> ScenarioConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        raise ScenarioParseError(f"{where}: {e.problem}") from e
    except yaml.YAMLError as e:
        raise ScenarioParseError(f"{source}: {e}") from e
    if not isinstance(data, dict):
        raise ScenarioParseError(f"{source}: top level must be a key-value mapping")
    return build_scenario(data, source)


class ScenarioConfigManager:
    """🔧 Lists and loads bundled scenario files"""

    def __init__(self, scenario_dir: Optional[Union[str, Path]] = None):
        self.scenario_dir = Path(scenario_dir or os.getenv('RRBEAM_SCENARIO_DIR', DEFAULT_SCENARIO_DIR))

    def list_scenarios(self) -> List[str]:
        """Names of bundled scenarios (file stems)"""
        if not self.scenario_dir.is_dir():
            return []
        return sorted(p.stem for p in self.scenario_dir.glob('*.yaml'))

    def resolve(self, path_or_name: Union[str, Path]) -> Path:
        path = Path(path_or_name)
        if path.is_file():
            return path
        bundled = self.scenario_dir / f"{path_or_name}.yaml"
        if bundled.is_file():
            return bundled
        raise ScenarioParseError(f"{path_or_name}: no such scenario file or bundled scenario "
                                 f"(bundled: {', '.join(self.list_scenarios())})")

    def load(self, path_or_name: Union[str, Path]) -> ScenarioConfig:
        path = self.resolve(path_or_name)
        try:
            text = path.read_text(encoding='utf-8')
        except (OSError, UnicodeDecodeError) as e:
            raise ScenarioParseError(f"{path}: {e}") from e
        config = parse_scenario_text(text, str(path))
        logger.info(f"✅ Loaded scenario '{config.name}' from {path} "
                    f"(M={config.geometry.num_sensors}, D={config.rank}, N={config.snapshots})")
        return config


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Load a scenario file (or bundled scenario name)"""
    return ScenarioConfigManager().load(path)
