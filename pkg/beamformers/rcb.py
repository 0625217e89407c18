"""Robust Capon beamforming under a spherical steering-vector uncertainty set.

Solves  min_a aᴴR⁻¹a  s.t.  ‖a − ā‖² = ε.  With R = U·diag(γ)·Uᴴ and z = Uᴴā the
optimum is â = ā − U·diag(1/(1+λγ))·z, where λ > 0 is the root of the
monotonically decreasing secular function Σ|z_m|²/(1+λγ_m)² − ε.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import linalg, optimize

from shared_components.exceptions import (
    ConvergenceError,
    InfeasibleUncertaintyError,
    NumericalFailureError,
)

from .baselines import mvdr_weights

logger = logging.getLogger(__name__)

MAX_MULTIPLIER_ITERATIONS = 200
CONSTRAINT_TOLERANCE = 1e-10


def rcb_steering_from_eigh(gamma: np.ndarray, u: np.ndarray, a_bar: np.ndarray,
                           epsilon: float) -> Tuple[np.ndarray, float]:
    """Return (â, λ) given the eigendecomposition (γ, U) of the covariance"""

    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    z = u.conj().T @ a_bar
    z_sq = np.abs(z) ** 2
    norm_sq = float(np.sum(z_sq))
    if epsilon >= norm_sq:
        raise InfeasibleUncertaintyError(f"epsilon {epsilon} >= ||a_bar||^2 = {norm_sq:.6g}")
    gamma_min = float(np.min(gamma))
    if gamma_min <= 0:
        raise NumericalFailureError(f"covariance is not positive definite (min eigenvalue {gamma_min:.3e})")

    def secular(lam: float) -> float:
        return float(np.sum(z_sq / (1.0 + lam * gamma) ** 2)) - epsilon

    # g(λ) ≤ ‖ā‖²/(1+λγ_min)², which reaches ε at the bound below
    upper = (np.sqrt(norm_sq) - np.sqrt(epsilon)) / (gamma_min * np.sqrt(epsilon))
    upper = upper * (1.0 + 1e-6) + np.finfo(float).tiny
    lam, result = optimize.brentq(secular, 0.0, upper, xtol=1e-300,
                                  maxiter=MAX_MULTIPLIER_ITERATIONS, full_output=True, disp=False)
    if not result.converged:
        raise ConvergenceError(f"multiplier search stopped after {result.iterations} iterations")

    a_hat = a_bar - u @ (z / (1.0 + lam * gamma))
    residual = abs(np.real(np.vdot(a_hat - a_bar, a_hat - a_bar)) - epsilon)
    if residual > CONSTRAINT_TOLERANCE * max(1.0, epsilon):
        logger.debug(f"RCB constraint residual {residual:.3e} (lambda={lam:.6g})")
    return a_hat, lam


def rcb_steering(r_hat: np.ndarray, a_bar: np.ndarray, epsilon: float) -> np.ndarray:
    """Robust steering estimate â for covariance R̂"""
    gamma, u = linalg.eigh(r_hat)
    a_hat, _ = rcb_steering_from_eigh(gamma, u, np.asarray(a_bar, dtype=complex), epsilon)
    return a_hat


def rcb_fullrank(r_hat: np.ndarray, a_bar: np.ndarray, epsilon: float) -> np.ndarray:
    """Full-rank robust Capon weights: mvdr_weights(R̂⁻¹, â)"""

    a_bar = np.asarray(a_bar, dtype=complex)
    gamma, u = linalg.eigh(r_hat)
    a_hat, _ = rcb_steering_from_eigh(gamma, u, a_bar, epsilon)
    r_inv = (u / gamma) @ u.conj().T
    return mvdr_weights(r_inv, a_hat)


def reduced_rcb_solution(reduced_inv: np.ndarray, a_bar_reduced: np.ndarray,
                          epsilon: float) -> Tuple[np.ndarray, float]:
    """(â, λ) in a reduced space, given the tracked inverse R_D⁻¹ rather than R_D"""
    p, u = linalg.eigh(reduced_inv)
    if np.min(p) <= 0:
        raise NumericalFailureError("tracked reduced inverse is not positive definite")
    return rcb_steering_from_eigh(1.0 / p, u, a_bar_reduced, epsilon)


def reduced_rcb_steering(reduced_inv: np.ndarray, a_bar_reduced: np.ndarray, epsilon: float) -> np.ndarray:
    """Robust Capon steering in a reduced space, given the tracked inverse R_D⁻¹"""
    a_hat, _ = reduced_rcb_solution(reduced_inv, a_bar_reduced, epsilon)
    return a_hat
