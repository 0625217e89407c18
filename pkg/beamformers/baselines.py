"""Full-rank MVDR baselines: closed form, SMI, constrained SG and RLS."""

import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy import linalg

from array_model.covariance_tracker import CovarianceTracker, update_covariance
from array_model.snapshots import SnapshotLike, as_vector
from shared_components.exceptions import SingularityError

logger = logging.getLogger(__name__)

NORMALISATION_FLOOR = 1e-14


def mvdr_weights(r_inv: np.ndarray, a: np.ndarray) -> np.ndarray:
    """R⁻¹a / (aᴴR⁻¹a); satisfies ωᴴa = 1"""

    numerator = r_inv @ a
    denominator = np.vdot(a, numerator)
    if abs(denominator) < NORMALISATION_FLOOR:
        raise SingularityError(f"aᴴR⁻¹a = {abs(denominator):.3e} is numerically zero")
    return numerator / denominator


def smi_weights(r_hat: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Sample-matrix-inversion MVDR: solve R̂·u = a directly, then normalise"""

    u = linalg.solve(r_hat, a, assume_a='her')
    denominator = np.vdot(a, u)
    if abs(denominator) < NORMALISATION_FLOOR:
        raise SingularityError(f"aᴴR̂⁻¹a = {abs(denominator):.3e} is numerically zero")
    return u / denominator


@dataclass
class FullRankState:
    """Full-rank beamformer ω with its covariance tracker and SG step size μ"""
    weights: np.ndarray
    tracker: CovarianceTracker
    step_size: float
    a_bar: np.ndarray

    @classmethod
    def initial(cls, a_bar: np.ndarray, forgetting: float, delta: float, step_size: float) -> 'FullRankState':
        a_bar = np.asarray(a_bar, dtype=complex)
        return cls(
            weights=a_bar / np.real(np.vdot(a_bar, a_bar)),
            tracker=CovarianceTracker.initial(a_bar.size, forgetting, delta),
            step_size=step_size,
            a_bar=a_bar,
        )


def _reproject(weights: np.ndarray, a_bar: np.ndarray) -> np.ndarray:
    """Pω + ā/(āᴴā): the closest vector to ω with ωᴴā = 1"""
    norm_sq = np.real(np.vdot(a_bar, a_bar))
    return weights - a_bar * (np.vdot(a_bar, weights) - 1.0) / norm_sq


def fullrank_sg_step(state: FullRankState, x: SnapshotLike) -> FullRankState:
    """Constrained LMS: ω ← ω − μ·P·x·y*, then re-project onto ωᴴā = 1

    μ is normalised by the instantaneous trace power ‖x‖².
    """
    x = as_vector(x)
    power = np.real(np.vdot(x, x))
    if state.step_size == 0 or power == 0:
        return state
    y = np.vdot(state.weights, x)
    px = x - state.a_bar * np.vdot(state.a_bar, x) / np.real(np.vdot(state.a_bar, state.a_bar))
    weights = state.weights - (state.step_size / power) * px * np.conj(y)
    return replace(state, weights=_reproject(weights, state.a_bar))


def fullrank_rls_step(state: FullRankState, x: SnapshotLike) -> FullRankState:
    """Track R⁻¹ by RLS, then ω = mvdr_weights(R⁻¹, ā)"""
    tracker = update_covariance(state.tracker, x)
    return replace(state, tracker=tracker, weights=mvdr_weights(tracker.r_inv, state.a_bar))


def fullrank_smi_step(state: FullRankState, x: SnapshotLike) -> FullRankState:
    """Update R̂ and re-solve the MVDR system directly"""
    tracker = update_covariance(state.tracker, x)
    return replace(state, tracker=tracker, weights=smi_weights(tracker.r_hat, state.a_bar))
