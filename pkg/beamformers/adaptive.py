"""Stateful beamformers, one class per algorithm identifier."""

import logging
from typing import TYPE_CHECKING, Dict, Type

import numpy as np
from scipy import linalg

from array_model.covariance_tracker import CovarianceTracker, hermitian_part, update_covariance
from array_model.snapshots import SnapshotLike

from .base_beamformer import BaseBeamformer
from .baselines import FullRankState, fullrank_rls_step, fullrank_sg_step, fullrank_smi_step, mvdr_weights
from .krylov import krylov_projection
from .mjio import MjioState, mjio_rls_step, mjio_sg_step, reduced_steering
from .rcb import rcb_fullrank, reduced_rcb_steering
from .rcb_mjio import RcbMjioState, rcb_mjio_rls_step, rcb_mjio_sg_step
from .steering_bank import build_steering_bank

if TYPE_CHECKING:
    from core_system.scenario_config import ScenarioConfig

logger = logging.getLogger(__name__)

# Share of ||S_D^H a_bar||^2 the reduced robust Capon radius is capped at
REDUCED_EPSILON_FRACTION = 0.5


# ========================================================================
# Full-rank baselines
# ========================================================================

class _FullRankBeamformer(BaseBeamformer):
    def __init__(self, config: 'ScenarioConfig', presumed_doa: float):
        super().__init__(config, presumed_doa)
        self.state = FullRankState.initial(self.a_bar, config.forgetting, config.delta, config.mu_w)

    def full_weights(self) -> np.ndarray:
        return self.state.weights


class MvdrSmiBeamformer(_FullRankBeamformer):
    algorithm_id = 'mvdr-smi'

    def step(self, x: SnapshotLike) -> None:
        self.state = fullrank_smi_step(self.state, x)


class MvdrSgBeamformer(_FullRankBeamformer):
    algorithm_id = 'mvdr-sg'

    def step(self, x: SnapshotLike) -> None:
        self.state = fullrank_sg_step(self.state, x)


class MvdrRlsBeamformer(_FullRankBeamformer):
    algorithm_id = 'mvdr-rls'

    def step(self, x: SnapshotLike) -> None:
        self.state = fullrank_rls_step(self.state, x)


class RcbFullRankBeamformer(_FullRankBeamformer):
    """Robust Capon on the exponentially weighted sample covariance"""
    algorithm_id = 'rcb-fullrank'

    def step(self, x: SnapshotLike) -> None:
        tracker = update_covariance(self.state.tracker, x)
        weights = rcb_fullrank(tracker.r_hat, self.a_bar, self.config.fullrank_epsilon)
        self.state = FullRankState(weights=weights, tracker=tracker,
                                   step_size=self.state.step_size, a_bar=self.a_bar)


# ========================================================================
# Krylov rank reduction
# ========================================================================

class KrylovRlsBeamformer(BaseBeamformer):
    """S_D spans [ā, R̂ā, …]; ω is the MVDR solution in that subspace"""
    algorithm_id = 'krylov-rls'
    reduced_rank = True

    def __init__(self, config: 'ScenarioConfig', presumed_doa: float):
        super().__init__(config, presumed_doa)
        self.tracker = CovarianceTracker.initial(self.num_sensors, config.forgetting, config.delta)
        # R̂ = δ⁻¹I leaves ā as an eigenvector, so the first Krylov basis waits for data
        norm = np.linalg.norm(self.a_bar)
        self.s_matrix = (self.a_bar / norm)[:, np.newaxis]
        self.weights = np.array([1.0 / norm], dtype=complex)

    def _reduced_inverse(self) -> np.ndarray:
        reduced = self.s_matrix.conj().T @ self.tracker.r_hat @ self.s_matrix
        return hermitian_part(linalg.inv(hermitian_part(reduced)))

    def _reduced_weights(self, reduced_inv: np.ndarray, a_bar_reduced: np.ndarray) -> np.ndarray:
        return mvdr_weights(reduced_inv, a_bar_reduced)

    def step(self, x: SnapshotLike) -> None:
        self.tracker = update_covariance(self.tracker, x)
        self.s_matrix = krylov_projection(self.tracker.r_hat, self.a_bar, self.config.rank)
        self.weights = self._reduced_weights(self._reduced_inverse(), reduced_steering(self.s_matrix, self.a_bar))

    def full_weights(self) -> np.ndarray:
        return self.s_matrix @ self.weights


class RcbKrylovRlsBeamformer(KrylovRlsBeamformer):
    """Krylov subspace with a robust Capon steering estimate in reduced dimension"""
    algorithm_id = 'rcb-krylov-rls'

    def _reduced_weights(self, reduced_inv: np.ndarray, a_bar_reduced: np.ndarray) -> np.ndarray:
        limit = REDUCED_EPSILON_FRACTION * np.real(np.vdot(a_bar_reduced, a_bar_reduced))
        epsilon = min(self.config.fullrank_epsilon, limit)
        a_hat = reduced_rcb_steering(reduced_inv, a_bar_reduced, epsilon)
        return mvdr_weights(reduced_inv, a_hat)


# ========================================================================
# Joint iterative optimization (MJIO)
# ========================================================================

class _MjioBeamformer(BaseBeamformer):
    reduced_rank = True

    def __init__(self, config: 'ScenarioConfig', presumed_doa: float):
        super().__init__(config, presumed_doa)
        self.bank = build_steering_bank(presumed_doa, config.geometry, config.rank, config.perturbation_degrees)
        self.state = MjioState.initial(self.bank, config.forgetting, config.delta, config.mu_w, config.mu_s,
                                       loading=config.column_loading)

    @property
    def s_matrix(self) -> np.ndarray:
        return self.state.s_matrix

    def full_weights(self) -> np.ndarray:
        return self.state.full_weights()


class MvdrMjioSgBeamformer(_MjioBeamformer):
    algorithm_id = 'mvdr-mjio-sg'

    def step(self, x: SnapshotLike) -> None:
        self.state = mjio_sg_step(self.state, self.bank, x)


class MvdrMjioRlsBeamformer(_MjioBeamformer):
    algorithm_id = 'mvdr-mjio-rls'

    def step(self, x: SnapshotLike) -> None:
        self.state = mjio_rls_step(self.state, self.bank, x)


class _RcbMjioBeamformer(BaseBeamformer):
    reduced_rank = True

    def __init__(self, config: 'ScenarioConfig', presumed_doa: float):
        super().__init__(config, presumed_doa)
        self.bank = build_steering_bank(presumed_doa, config.geometry, config.rank, config.perturbation_degrees)
        self.state = RcbMjioState.initial(
            self.bank, config.forgetting, config.delta, config.epsilon,
            mu_w=config.mu_w, mu_s=config.mu_s, mu_a=config.mu_a,
            use_gram_schmidt=config.gram_schmidt, column_rule=config.rcb_column_rule,
            loading=config.column_loading,
        )

    @property
    def s_matrix(self) -> np.ndarray:
        return self.state.base.s_matrix

    def full_weights(self) -> np.ndarray:
        return self.state.full_weights()


class RcbMjioSgBeamformer(_RcbMjioBeamformer):
    algorithm_id = 'rcb-mjio-sg'

    def step(self, x: SnapshotLike) -> None:
        self.state = rcb_mjio_sg_step(self.state, x)


class RcbMjioRlsBeamformer(_RcbMjioBeamformer):
    algorithm_id = 'rcb-mjio-rls'

    def step(self, x: SnapshotLike) -> None:
        self.state = rcb_mjio_rls_step(self.state, x)


BEAMFORMER_CLASSES: Dict[str, Type[BaseBeamformer]] = {
    cls.algorithm_id: cls
    for cls in (
        MvdrSmiBeamformer,
        MvdrSgBeamformer,
        MvdrRlsBeamformer,
        RcbFullRankBeamformer,
        KrylovRlsBeamformer,
        MvdrMjioSgBeamformer,
        MvdrMjioRlsBeamformer,
        RcbMjioSgBeamformer,
        RcbMjioRlsBeamformer,
        RcbKrylovRlsBeamformer,
    )
}
