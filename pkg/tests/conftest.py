import os
from typing import Any, Dict, List, Optional

import numpy as np
import pytest

from core_system.scenario_config import ScenarioConfig, build_scenario

TABLE1_SOURCES = [
    {'doa_degrees': 90.0, 'power_db': 10.0, 'is_soi': True},
    {'doa_degrees': 35.0, 'power_db': 20.0},
    {'doa_degrees': 135.0, 'power_db': 20.0},
    {'doa_degrees': 165.0, 'power_db': 20.0},
]


def pytest_collection_modifyitems(config, items):
    if os.getenv('RRBEAM_EXTENDED') == '1':
        return
    skip = pytest.mark.skip(reason="set RRBEAM_EXTENDED=1 to run figure-scale reproductions")
    for item in items:
        if 'extended' in item.keywords:
            item.add_marker(skip)


def _make_scenario(num_sensors: int = 8, sources: Optional[List[Dict[str, Any]]] = None,
                   **overrides: Any) -> ScenarioConfig:
    data = {
        'name': 'test',
        'geometry': {'num_sensors': num_sensors},
        'sources': sources if sources is not None else TABLE1_SOURCES,
    }
    data.update(overrides)
    return build_scenario(data)


@pytest.fixture
def make_scenario():
    return _make_scenario


@pytest.fixture
def table1_m64() -> ScenarioConfig:
    return _make_scenario(64, TABLE1_SOURCES, epsilon=140.0, mismatch_max_degrees=2.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian_pd(rng: np.random.Generator, n: int) -> np.ndarray:
    a = random_complex(rng, n, n)
    return a @ a.conj().T + n * np.eye(n)
