"""Uniform linear array geometry, source descriptions and steering vectors."""

import logging
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)


class ArrayGeometry(BaseModel):
    """📐 Uniform linear array: sensor count M and spacing ι/λ_c"""

    model_config = ConfigDict(extra='forbid', frozen=True)

    num_sensors: int = Field(ge=2)
    spacing_ratio: float = Field(default=0.5, gt=0)


class SourceSpec(BaseModel):
    """📡 One narrowband source

    The signal of interest carries its absolute SNR in ``power_db`` (noise is
    unit power per element); interferers carry their power relative to the
    signal of interest.
    """

    model_config = ConfigDict(extra='forbid', frozen=True)

    doa_degrees: float = Field(gt=0, lt=180)
    power_db: float
    is_soi: bool = False


def steering_vector(geometry: ArrayGeometry, doa_degrees: Union[float, np.floating]) -> np.ndarray:
    """ULA phase response: element m is exp(-2πj·m·(ι/λ_c)·cos θ)"""

    m = np.arange(geometry.num_sensors)
    phase = -2j * np.pi * geometry.spacing_ratio * np.cos(np.deg2rad(doa_degrees))
    return np.exp(phase * m)


def steering_matrix(geometry: ArrayGeometry, doas_degrees) -> np.ndarray:
    """Columns are steering vectors for each DoA (M x K)"""
    return np.column_stack([steering_vector(geometry, doa) for doa in doas_degrees])
