"""MVDR-MJIO: joint adaptation of the rank-reduction matrix S_D and the
reduced-rank beamformer ω, by constrained SG and by RLS."""

import logging
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np
from scipy import linalg

from array_model.covariance_tracker import (
    CovarianceTracker,
    hermitian_part,
    loaded_covariance,
    riccati_update,
    update_covariance,
)
from array_model.snapshots import SnapshotLike, as_vector
from shared_components.exceptions import DegenerateInputError, SingularityError

from .baselines import NORMALISATION_FLOOR, mvdr_weights
from .steering_bank import SteeringBank

logger = logging.getLogger(__name__)

WEIGHT_DIVISION_FLOOR = 1e-12
# A candidate column shorter than this fraction of the one it replaces has collapsed
COLUMN_COLLAPSE_FLOOR = 1e-6
# Smallest accepted σ_min/σ_max of S_D after a column update
RANK_FLOOR = 1e-5


@dataclass
class MjioState:
    """Rank-reduction matrix S_D, reduced beamformer ω and the tracked inverses

    ``loading`` is the column loading γ in units of the per-snapshot noise
    floor; zero keeps the plain tracked R̂⁻¹.
    """
    s_matrix: np.ndarray
    weights: np.ndarray
    tracker: CovarianceTracker
    reduced_inv: np.ndarray
    mu_w: float
    mu_s: float
    loading: float = 0.0

    @classmethod
    def initial(cls, bank: SteeringBank, forgetting: float, delta: float,
                mu_w: float = 0.005, mu_s: float = 0.005, loading: float = 0.0) -> 'MjioState':
        """S_D = [I_D; 0], ω = a_D/‖a_D‖², both inverses δ·I"""
        if loading < 0:
            raise ValueError(f"column loading must be non-negative, got {loading}")
        m, d = bank.assumed.size, bank.rank
        s_matrix = np.zeros((m, d), dtype=complex)
        s_matrix[:d, :d] = np.eye(d)
        a_d = reduced_steering(s_matrix, bank.assumed)
        tracker = CovarianceTracker.initial(m, forgetting, delta)
        return cls(
            s_matrix=s_matrix,
            weights=a_d / np.real(np.vdot(a_d, a_d)),
            tracker=tracker,
            reduced_inv=delta * np.eye(d, dtype=complex),
            mu_w=mu_w,
            mu_s=mu_s,
            loading=loading,
        )

    @property
    def rank(self) -> int:
        return self.s_matrix.shape[1]

    def full_weights(self) -> np.ndarray:
        """S_D·ω, recomputed on every call"""
        return self.s_matrix @ self.weights

    def column_covariance(self) -> np.ndarray:
        return loaded_covariance(self.tracker, self.loading)


def reduced_steering(s_matrix: np.ndarray, a: np.ndarray) -> np.ndarray:
    """a_D = S_Dᴴ·a (entry d is s_dᴴ·a)"""
    return s_matrix.conj().T @ a


def constraint_projector(v: np.ndarray) -> np.ndarray:
    """I − v·vᴴ/(vᴴv): Hermitian, idempotent, annihilates v"""

    v = np.asarray(v, dtype=complex)
    norm_sq = np.real(np.vdot(v, v))
    if norm_sq == 0:
        raise DegenerateInputError("constraint projector of a zero vector")
    return np.eye(v.size, dtype=complex) - np.outer(v, v.conj()) / norm_sq


def project_out(v: np.ndarray, y: np.ndarray) -> np.ndarray:
    """constraint_projector(v) @ y without forming the matrix"""
    return y - v * (np.vdot(v, y) / np.real(np.vdot(v, v)))


def smallest_singular_value(s_matrix: np.ndarray) -> float:
    return float(np.linalg.svd(s_matrix, compute_uv=False)[-1])


def reduced_inverse(covariance: np.ndarray, s_matrix: np.ndarray) -> np.ndarray:
    """(S_DᴴR·S_D)⁻¹ for the current columns"""
    reduced = hermitian_part(s_matrix.conj().T @ covariance @ s_matrix)
    return hermitian_part(linalg.inv(reduced))


def accept_column(s_matrix: np.ndarray, d: int, candidate: np.ndarray) -> bool:
    """Whether ``candidate`` may replace column d without collapsing S_D"""
    if not np.all(np.isfinite(candidate)):
        return False
    if np.linalg.norm(candidate) < COLUMN_COLLAPSE_FLOOR * np.linalg.norm(s_matrix[:, d]):
        return False
    trial = s_matrix.copy()
    trial[:, d] = candidate
    singular = np.linalg.svd(trial, compute_uv=False)
    return bool(singular[-1] >= RANK_FLOOR * singular[0])


def mjio_sg_gradients(state: MjioState, x: SnapshotLike) -> Tuple[np.ndarray, np.ndarray]:
    """Instantaneous gradients of |ωᴴS_Dᴴx|² w.r.t. ω* and each s_d* (unprojected)

    Returns (x̃·z*, matrix whose column d is x·z*·w_d*).
    """
    x = as_vector(x)
    x_tilde = reduced_steering(state.s_matrix, x)
    z_conj = np.conj(np.vdot(state.weights, x_tilde))
    return x_tilde * z_conj, np.outer(x * z_conj, state.weights.conj())


def per_sensor_power(x: np.ndarray) -> float:
    return float(np.real(np.vdot(x, x))) / x.size


def column_sg_candidates(s_matrix: np.ndarray, weights: np.ndarray, a_bar: np.ndarray,
                         x: np.ndarray, mu_s: float) -> np.ndarray:
    """s_d − μ_s·P_s·x·z*·w_d* / p for every column, p the per-sensor power"""
    power = per_sensor_power(x)
    z_conj = np.conj(np.vdot(weights, reduced_steering(s_matrix, x)))
    p_s_x = project_out(a_bar, x)
    return s_matrix - (mu_s / power) * np.outer(p_s_x * z_conj, weights.conj())


def guarded_columns(s_matrix: np.ndarray, candidates: np.ndarray) -> Tuple[np.ndarray, bool]:
    """Take each candidate column that passes ``accept_column``; report whether any did"""
    new_s = s_matrix.copy()
    changed = False
    for d in range(s_matrix.shape[1]):
        if accept_column(new_s, d, candidates[:, d]):
            new_s[:, d] = candidates[:, d]
            changed = True
        else:
            logger.debug(f"keeping column {d}: update would collapse S_D")
    return new_s, changed


def mjio_sg_step(state: MjioState, bank: SteeringBank, x: SnapshotLike) -> MjioState:
    """ω ← ω − μ_w·P_w·S_Dᴴx·z*/p;  s_d ← s_d − μ_s·P_s·x·z*·w_d*/p

    p = ‖x‖²/M is the per-sensor power, so the step sizes carry the same
    meaning at every array size. P_s annihilates ā, so a_D = S_Dᴴā and with
    it ωᴴa_D are left unchanged by the step.
    """
    x = as_vector(x)
    power = per_sensor_power(x)
    if power == 0 or (state.mu_w == 0 and state.mu_s == 0):
        return state

    s_matrix, weights = state.s_matrix, state.weights
    a_d = reduced_steering(s_matrix, bank.assumed)
    x_tilde = reduced_steering(s_matrix, x)
    z_conj = np.conj(np.vdot(weights, x_tilde))

    p_w = constraint_projector(a_d)
    new_weights = weights - (state.mu_w / power) * (p_w @ x_tilde) * z_conj
    new_s = column_sg_candidates(s_matrix, weights, bank.assumed, x, state.mu_s)
    return replace(state, s_matrix=new_s, weights=new_weights)


def _column_update(r_inv_a: np.ndarray, a_d: np.ndarray, beta_d: np.ndarray, w_d: complex) -> np.ndarray:
    """s_d = R⁻¹a_d·a_dᴴβ_d / (a_dᴴR⁻¹a_d·w_d)"""
    denominator = np.vdot(a_d, r_inv_a) * w_d
    if abs(denominator) < NORMALISATION_FLOOR:
        raise SingularityError(f"column update denominator {abs(denominator):.3e} is numerically zero")
    return r_inv_a * (np.vdot(a_d, beta_d) / denominator)


def column_inverse_products(state: MjioState, bank: SteeringBank) -> np.ndarray:
    """R⁻¹·a_d for every candidate, R loaded by ``state.loading``"""
    if state.loading == 0:
        return state.tracker.r_inv @ np.column_stack(bank.candidates)
    return linalg.solve(state.column_covariance(), np.column_stack(bank.candidates), assume_a='pos')


def mjio_columns(state: MjioState, bank: SteeringBank) -> Tuple[np.ndarray, bool]:
    """Closed-form column sweep with ω held fixed

    Columns whose w_d is numerically zero, or whose update would collapse
    S_D, keep their previous value. Returns (S_D, whether any column moved).
    """
    s_old, weights = state.s_matrix, state.weights
    r_inv_a = column_inverse_products(state, bank)
    total = s_old @ weights
    candidates = s_old.copy()
    for d in range(state.rank):
        w_d = weights[d]
        if abs(w_d) < WEIGHT_DIVISION_FLOOR:
            logger.debug(f"skipping column {d}: |w_d| = {abs(w_d):.3e}")
            continue
        beta_d = total - np.delete(s_old, d, axis=1) @ np.delete(weights, d)
        try:
            candidates[:, d] = _column_update(r_inv_a[:, d], bank.candidates[d], beta_d, w_d)
        except SingularityError as e:
            logger.debug(f"skipping column {d}: {e}")
    if np.array_equal(candidates, s_old):
        return s_old, False
    return guarded_columns(s_old, candidates)


def mjio_rls_step(state: MjioState, bank: SteeringBank, x: SnapshotLike,
                  adapt_columns: bool = True) -> MjioState:
    """One MVDR-MJIO RLS iteration

    Statistics first (R⁻¹, and R_D⁻¹ on x̃ = S_Dᴴx), then the columns s_d,
    then ω = R_D⁻¹a_D/(a_DᴴR_D⁻¹a_D). Whenever S_D moved, or the columns are
    loaded, R_D⁻¹ is rebuilt from the same covariance the columns saw.
    ``adapt_columns=False`` freezes S_D.
    """
    x = as_vector(x)
    forgetting = state.tracker.forgetting

    x_tilde = reduced_steering(state.s_matrix, x)
    state = replace(
        state,
        reduced_inv=riccati_update(state.reduced_inv, x_tilde, forgetting),
        tracker=update_covariance(state.tracker, x),
    )

    if adapt_columns:
        s_new, changed = mjio_columns(state, bank)
        if changed or state.loading:
            state = replace(state, s_matrix=s_new,
                            reduced_inv=reduced_inverse(state.column_covariance(), s_new))

    a_d = reduced_steering(state.s_matrix, bank.assumed)
    return replace(state, weights=mvdr_weights(state.reduced_inv, a_d))
