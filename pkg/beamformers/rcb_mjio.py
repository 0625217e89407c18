"""RCB-MJIO: robust Capon steering estimation in the MJIO reduced space.

The reduced estimated steering vector ã starts with entries s_dᴴa_d, one per
bank candidate; ǎ_d is that vector with entry d removed. τ_d and r_d are the
d-th diagonal element and column of R_D⁻¹, and α_d = a_d − ā.

ã is kept on the reduced uncertainty sphere ‖ã − S_Dᴴā‖² = ε_D, where ε_D is ε
rescaled by ‖S_Dᴴā‖²/‖ā‖² and capped at RADIUS_FRACTION·‖S_Dᴴā‖². λ_RCB is the
root of that sphere's secular equation, so it is positive and bounded.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import List, Tuple

import numpy as np
from scipy import linalg

from array_model.covariance_tracker import riccati_update, update_covariance
from array_model.snapshots import SnapshotLike, as_vector
from shared_components.exceptions import DegenerateInputError, IllConditionedError, SingularSystemError

from .baselines import mvdr_weights
from .gram_schmidt import gram_schmidt
from .mjio import (
    MjioState,
    column_sg_candidates,
    guarded_columns,
    mjio_columns,
    per_sensor_power,
    reduced_inverse,
    reduced_steering,
)
from .rcb import reduced_rcb_solution
from .steering_bank import SteeringBank

logger = logging.getLogger(__name__)

MULTIPLIER_FLOOR = 1e-14
CONDITION_LIMIT = 1e12
PINV_CUTOFF = 1e-10
TIKHONOV = 1e-8
RADIUS_FRACTION = 0.5
COLUMN_RULES = ('mjio', 'capon')


@dataclass
class RcbMjioState:
    """MJIO state plus the robust reduced steering vector ã and its multipliers

    ``column_rule`` picks the S_D update: 'mjio' keeps the MVDR-MJIO column
    rule, 'capon' minimises the RCB-MJIO Lagrangian column by column.
    ``column_lambdas`` holds the per-column multipliers the 'capon' rule used
    on the last step.
    """
    base: MjioState
    a_tilde: np.ndarray
    lambda_rcb: float
    epsilon: float
    alpha_diff: List[np.ndarray]
    mu_a: float
    bank: SteeringBank
    gram_schmidt: bool = False
    column_rule: str = 'mjio'
    column_lambdas: List[float] = field(default_factory=list)

    @classmethod
    def initial(cls, bank: SteeringBank, forgetting: float, delta: float, epsilon: float,
                mu_w: float = 0.005, mu_s: float = 0.005, mu_a: float = 0.01,
                use_gram_schmidt: bool = False, column_rule: str = 'mjio',
                loading: float = 0.0) -> 'RcbMjioState':
        if epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        if column_rule not in COLUMN_RULES:
            raise ValueError(f"column rule must be one of {', '.join(COLUMN_RULES)}, got {column_rule!r}")
        base = MjioState.initial(bank, forgetting, delta, mu_w, mu_s, loading)
        if use_gram_schmidt:
            base = replace(base, s_matrix=gram_schmidt(base.s_matrix))
        a_tilde = estimated_reduced_steering(base.s_matrix, bank)
        _, lambda_rcb = robust_reduced_steering(base, bank, epsilon)
        base = replace(base, weights=mvdr_weights(base.reduced_inv, a_tilde))
        return cls(
            base=base,
            a_tilde=a_tilde,
            lambda_rcb=lambda_rcb,
            epsilon=epsilon,
            alpha_diff=bank.alpha_differences(),
            mu_a=mu_a,
            bank=bank,
            gram_schmidt=use_gram_schmidt,
            column_rule=column_rule,
        )

    def full_weights(self) -> np.ndarray:
        return self.base.full_weights()


# ========================================================================
# Reduced steering vectors and the Lagrangian
# ========================================================================

def estimated_reduced_steering(s_matrix: np.ndarray, bank: SteeringBank) -> np.ndarray:
    """Entry d is s_dᴴa_d"""
    return np.array([np.vdot(s_matrix[:, d], a_d) for d, a_d in enumerate(bank.candidates)])


def excluded_steering(s_matrix: np.ndarray, bank: SteeringBank, d: int) -> np.ndarray:
    """ǎ_d: the estimated reduced steering vector with entry d zeroed"""
    a_check = estimated_reduced_steering(s_matrix, bank)
    a_check[d] = 0.0
    return a_check


def reduced_radius(s_matrix: np.ndarray, bank: SteeringBank, epsilon: float) -> float:
    """ε_D = min(ε/‖ā‖², RADIUS_FRACTION)·‖S_Dᴴā‖²"""
    presumed = reduced_steering(s_matrix, bank.assumed)
    presumed_sq = float(np.real(np.vdot(presumed, presumed)))
    if presumed_sq == 0:
        raise DegenerateInputError("S_D annihilates the presumed steering vector")
    full_sq = float(np.real(np.vdot(bank.assumed, bank.assumed)))
    return min(epsilon / full_sq, RADIUS_FRACTION) * presumed_sq


def robust_reduced_steering(base: MjioState, bank: SteeringBank, epsilon: float) -> Tuple[np.ndarray, float]:
    """(â, λ_RCB) on the reduced sphere around S_Dᴴā

    â = S_Dᴴā − (I_D + λ·R_D)⁻¹·S_Dᴴā, evaluated in the eigenbasis of R_D⁻¹.
    """
    presumed = reduced_steering(base.s_matrix, bank.assumed)
    return reduced_rcb_solution(base.reduced_inv, presumed, reduced_radius(base.s_matrix, bank, epsilon))


def rcb_lagrangian(s_matrix: np.ndarray, reduced_inv: np.ndarray, bank: SteeringBank,
                   lambda_rcb: float, epsilon: float) -> float:
    """ãᴴR_D⁻¹ã + λ(‖ã − S_Dᴴā‖² − ε), with ã computed from S_D"""
    a_tilde = estimated_reduced_steering(s_matrix, bank)
    mismatch = a_tilde - reduced_steering(s_matrix, bank.assumed)
    quadratic = np.real(np.vdot(a_tilde, reduced_inv @ a_tilde))
    return float(quadratic + lambda_rcb * (np.real(np.vdot(mismatch, mismatch)) - epsilon))


def lagrange_multiplier_rcb(state: RcbMjioState, d: int) -> float:
    """λ_d = −(S_Dᴴα_dα_dᴴs_d)^† (R_D⁻¹ã·a_dᴴs_d), as the real least-squares scalar"""

    s_matrix, reduced_inv = state.base.s_matrix, state.base.reduced_inv
    alpha_d, a_d, s_d = state.alpha_diff[d], state.bank.candidates[d], s_matrix[:, d]
    if not np.any(alpha_d):
        raise DegenerateInputError(f"column {d}: α_d = 0, no mismatch direction")
    u = reduced_steering(s_matrix, alpha_d) * np.vdot(alpha_d, s_d)
    u_norm_sq = np.real(np.vdot(u, u))
    if u_norm_sq == 0:
        raise DegenerateInputError(f"column {d}: S_Dᴴα_dα_dᴴs_d = 0")
    v = (reduced_inv @ state.a_tilde) * np.vdot(a_d, s_d)
    return float(-np.real(np.vdot(u, v)) / u_norm_sq)


def column_multipliers(state: RcbMjioState) -> List[float]:
    """Per-column λ_d for the column rule: 0 where degenerate, negative values clipped to 0"""
    multipliers = []
    for d in range(state.base.rank):
        try:
            lam = lagrange_multiplier_rcb(state, d)
        except DegenerateInputError:
            lam = 0.0
        multipliers.append(max(lam, 0.0))
    return multipliers


# ========================================================================
# Gradients (SG) and closed-form updates (RLS)
# ========================================================================

def _checked_solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    condition = np.linalg.cond(matrix)
    if condition > CONDITION_LIMIT:
        raise IllConditionedError(f"condition number {condition:.3e} exceeds {CONDITION_LIMIT:.0e}")
    return linalg.solve(matrix, rhs)


def rcb_steering_gradient(reduced_inv: np.ndarray, a_tilde: np.ndarray, presumed: np.ndarray,
                          lambda_rcb: float) -> np.ndarray:
    """g_a = ã − ((1/λ)·R_D⁻¹ + I_D)⁻¹·S_Dᴴā

    The second term is the robust steering estimate on the reduced sphere, so
    g_a vanishes exactly there.
    """
    if lambda_rcb < MULTIPLIER_FLOOR:
        raise DegenerateInputError(f"λ_RCB = {lambda_rcb:.3e} leaves the steering gradient undefined")
    matrix = reduced_inv / lambda_rcb + np.eye(a_tilde.size)
    return a_tilde - _checked_solve(matrix, presumed)


def rcb_column_gradient(s_matrix: np.ndarray, reduced_inv: np.ndarray, bank: SteeringBank,
                        d: int, lambda_d: float) -> np.ndarray:
    """g_s = a_d·ǎ_dᴴr_d + τ_d·a_d·a_dᴴs_d + λ·α_d·α_dᴴs_d"""
    a_d, s_d = bank.candidates[d], s_matrix[:, d]
    alpha_d = a_d - bank.assumed
    tau_d = np.real(reduced_inv[d, d])
    r_d = reduced_inv[:, d]
    a_check = excluded_steering(s_matrix, bank, d)
    return (a_d * np.vdot(a_check, r_d)
            + tau_d * a_d * np.vdot(a_d, s_d)
            + lambda_d * alpha_d * np.vdot(alpha_d, s_d))


def regularized_pinv_solve(tau_d: float, a_d: np.ndarray, lambda_d: float, alpha_d: np.ndarray,
                           rhs: np.ndarray) -> np.ndarray:
    """(τ_d·a_da_dᴴ + λ·α_dα_dᴴ)^+ · rhs, on the rank ≤ 2 span of {a_d, α_d}"""

    basis = linalg.orth(np.column_stack([a_d, alpha_d]), rcond=PINV_CUTOFF)
    a_c, alpha_c = basis.conj().T @ a_d, basis.conj().T @ alpha_d
    compressed = tau_d * np.outer(a_c, a_c.conj()) + lambda_d * np.outer(alpha_c, alpha_c.conj())
    gamma, vectors = linalg.eigh(compressed)
    scale = np.max(np.abs(gamma)) if gamma.size else 0.0
    if scale == 0:
        raise SingularSystemError("column system matrix is numerically zero")
    keep = np.abs(gamma) > PINV_CUTOFF * scale
    inverse = np.zeros_like(gamma)
    inverse[keep] = 1.0 / (gamma[keep] + TIKHONOV * np.sign(gamma[keep]))
    coefficients = vectors @ (inverse * (vectors.conj().T @ (basis.conj().T @ rhs)))
    return basis @ coefficients


def _rescaled(column: np.ndarray, previous: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(column)
    if norm == 0:
        return column
    return column * (np.linalg.norm(previous) / norm)


def capon_rls_columns(state: RcbMjioState) -> Tuple[np.ndarray, bool]:
    """Closed-form Lagrangian minimiser per column, rescaled to the old column norm"""
    base, bank = state.base, state.bank
    s_old = base.s_matrix
    candidates = s_old.copy()
    for d in range(base.rank):
        a_d = bank.candidates[d]
        rhs = a_d * np.vdot(excluded_steering(s_old, bank, d), base.reduced_inv[:, d])
        if not np.any(rhs):
            # D = 1 has no cross terms; a zero solve would erase the column
            logger.debug(f"skipping column {d}: right-hand side vanishes")
            continue
        tau_d = np.real(base.reduced_inv[d, d])
        column = -regularized_pinv_solve(tau_d, a_d, state.column_lambdas[d], state.alpha_diff[d], rhs)
        candidates[:, d] = _rescaled(column, s_old[:, d])
    if np.array_equal(candidates, s_old):
        return s_old, False
    return guarded_columns(s_old, candidates)


def capon_sg_columns(state: RcbMjioState) -> Tuple[np.ndarray, bool]:
    """One Lagrangian gradient step per column, μ_s over the column curvature"""
    base, bank = state.base, state.bank
    s_old = base.s_matrix
    candidates = s_old.copy()
    for d in range(base.rank):
        lambda_d = state.column_lambdas[d]
        alpha_d, a_d = state.alpha_diff[d], bank.candidates[d]
        curvature = (np.real(base.reduced_inv[d, d]) * np.real(np.vdot(a_d, a_d))
                     + lambda_d * np.real(np.vdot(alpha_d, alpha_d)))
        if curvature <= 0:
            continue
        gradient = rcb_column_gradient(s_old, base.reduced_inv, bank, d, lambda_d)
        candidates[:, d] = _rescaled(s_old[:, d] - (base.mu_s / curvature) * gradient, s_old[:, d])
    return guarded_columns(s_old, candidates)


def _refresh(state: RcbMjioState, x: np.ndarray) -> RcbMjioState:
    """Fold x into R⁻¹ and (through x̃ = S_Dᴴx) into R_D⁻¹"""
    base = state.base
    reduced_inv = riccati_update(base.reduced_inv, reduced_steering(base.s_matrix, x), base.tracker.forgetting)
    return replace(state, base=replace(base, tracker=update_covariance(base.tracker, x), reduced_inv=reduced_inv))


def _with_columns(state: RcbMjioState, new_s: np.ndarray, changed: bool) -> RcbMjioState:
    """Install new columns and rebuild R_D⁻¹ from the covariance they were fitted to"""
    base = state.base
    if state.gram_schmidt and changed:
        new_s = gram_schmidt(new_s)
    if changed or base.loading:
        base = replace(base, s_matrix=new_s, reduced_inv=reduced_inverse(base.column_covariance(), new_s))
    return replace(state, base=base)


def rcb_mjio_sg_step(state: RcbMjioState, x: SnapshotLike) -> RcbMjioState:
    """Column step, refresh inverses, λ_RCB from the reduced sphere, ã ← ã − μ_a·g_a, ω by the MVDR rule on ã"""
    x = as_vector(x)
    base, bank = state.base, state.bank

    new_s, changed = base.s_matrix, False
    if base.mu_s and per_sensor_power(x) > 0:
        if state.column_rule == 'capon':
            state = replace(state, column_lambdas=column_multipliers(state))
            new_s, changed = capon_sg_columns(state)
        else:
            candidates = column_sg_candidates(base.s_matrix, base.weights, bank.assumed, x, base.mu_s)
            new_s, changed = guarded_columns(base.s_matrix, candidates)

    state = _refresh(state, x)
    state = _with_columns(state, new_s, changed)
    base = state.base

    presumed = reduced_steering(base.s_matrix, bank.assumed)
    _, lambda_rcb = reduced_rcb_solution(base.reduced_inv, presumed,
                                         reduced_radius(base.s_matrix, bank, state.epsilon))
    a_tilde = state.a_tilde
    if state.mu_a:
        a_tilde = a_tilde - state.mu_a * rcb_steering_gradient(base.reduced_inv, a_tilde, presumed, lambda_rcb)

    base = replace(base, weights=mvdr_weights(base.reduced_inv, a_tilde))
    return replace(state, base=base, a_tilde=a_tilde, lambda_rcb=lambda_rcb)


def rcb_mjio_rls_step(state: RcbMjioState, x: SnapshotLike) -> RcbMjioState:
    """Refresh statistics, update the columns, then ã and ω in closed form

    The columns use the previous ω (rule 'mjio') or the previous ã (rule
    'capon'); ã is then the robust estimate on the sphere around the new
    S_Dᴴā and ω = R_D⁻¹ã/(ãᴴR_D⁻¹ã).
    """
    x = as_vector(x)
    state = _refresh(state, x)

    if state.column_rule == 'capon':
        state = replace(state, column_lambdas=column_multipliers(state))
        new_s, changed = capon_rls_columns(state)
    else:
        new_s, changed = mjio_columns(state.base, state.bank)
    state = _with_columns(state, new_s, changed)

    base = state.base
    a_tilde, lambda_rcb = robust_reduced_steering(base, state.bank, state.epsilon)
    base = replace(base, weights=mvdr_weights(base.reduced_inv, a_tilde))
    return replace(state, base=base, a_tilde=a_tilde, lambda_rcb=lambda_rcb)
