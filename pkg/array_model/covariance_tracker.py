"""Exponentially weighted sample covariance and its RLS-tracked inverse."""

import logging
from dataclasses import dataclass, replace

import numpy as np

from shared_components.exceptions import NumericalFailureError

from .snapshots import SnapshotLike, as_vector

logger = logging.getLogger(__name__)

GAIN_DENOMINATOR_FLOOR = 1e-14


@dataclass
class CovarianceTracker:
    """📊 R̂ = α·R̂ + x·xᴴ together with R̂⁻¹ tracked by the Riccati recursion

    ``r_hat`` starts at δ⁻¹·I so that ``r_inv`` is its exact inverse at every
    step, not only asymptotically.
    """
    r_hat: np.ndarray
    r_inv: np.ndarray
    count: int
    forgetting: float
    delta: float

    @classmethod
    def initial(cls, dimension: int, forgetting: float, delta: float) -> 'CovarianceTracker':
        if not 0 < forgetting <= 1:
            raise ValueError(f"forgetting factor must lie in (0, 1], got {forgetting}")
        if delta <= 0:
            raise ValueError(f"delta must be positive, got {delta}")
        eye = np.eye(dimension, dtype=complex)
        return cls(r_hat=eye / delta, r_inv=eye * delta, count=0, forgetting=forgetting, delta=delta)

    @property
    def dimension(self) -> int:
        return self.r_inv.shape[0]


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def riccati_update(p: np.ndarray, x: np.ndarray, forgetting: float) -> np.ndarray:
    """Rank-one update of an inverse: (α·P⁻¹ + x·xᴴ)⁻¹ from P

    k = α⁻¹·P·x / (1 + α⁻¹·xᴴ·P·x),  P' = α⁻¹·P − α⁻¹·k·xᴴ·P
    """
    inv_alpha = 1.0 / forgetting
    px = p @ x
    denominator = 1.0 + inv_alpha * np.vdot(x, px)
    if abs(denominator) < GAIN_DENOMINATOR_FLOOR:
        raise NumericalFailureError(f"RLS gain denominator {abs(denominator):.3e} below floor")
    gain = inv_alpha * px / denominator
    # P Hermitian, so xᴴ·P = (P·x)ᴴ
    updated = inv_alpha * p - inv_alpha * np.outer(gain, px.conj())
    return hermitian_part(updated)


def update_covariance(tracker: CovarianceTracker, x: SnapshotLike) -> CovarianceTracker:
    """Fold one snapshot into both the covariance and its tracked inverse"""

    x = as_vector(x)
    r_inv = riccati_update(tracker.r_inv, x, tracker.forgetting)
    r_hat = hermitian_part(tracker.forgetting * tracker.r_hat + np.outer(x, x.conj()))
    return replace(tracker, r_hat=r_hat, r_inv=r_inv, count=tracker.count + 1)


def effective_snapshots(tracker: CovarianceTracker) -> float:
    """Σ α^k over the snapshots folded in so far (the count itself when α = 1)"""
    if tracker.forgetting == 1:
        return float(tracker.count)
    return (1.0 - tracker.forgetting ** tracker.count) / (1.0 - tracker.forgetting)


def loaded_covariance(tracker: CovarianceTracker, loading: float) -> np.ndarray:
    """R̂ + γ·n_eff·I: loading that keeps a fixed ratio to the per-snapshot noise floor"""
    if loading == 0:
        return tracker.r_hat
    return tracker.r_hat + (loading * effective_snapshots(tracker)) * np.eye(tracker.dimension)
