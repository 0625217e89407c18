from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from array_model import ArrayGeometry
from array_model.snapshots import SnapshotGenerator
from beamformers.gram_schmidt import gram_schmidt
from beamformers.mjio import reduced_steering, smallest_singular_value
from beamformers.rcb import reduced_rcb_solution
from beamformers.rcb_mjio import (
    COLUMN_RULES,
    RcbMjioState,
    column_multipliers,
    estimated_reduced_steering,
    lagrange_multiplier_rcb,
    rcb_column_gradient,
    rcb_lagrangian,
    rcb_mjio_rls_step,
    rcb_mjio_sg_step,
    rcb_steering_gradient,
    reduced_radius,
    regularized_pinv_solve,
)
from beamformers.steering_bank import build_steering_bank
from core_system.algorithm_manager import AlgorithmManager
from core_system.experiment_orchestrator import apply_mismatch, run_monte_carlo, trial_streams
from shared_components.exceptions import DegenerateInputError, RankDeficiencyError, SingularSystemError
from conftest import random_complex, random_hermitian_pd

GEOMETRY_8 = ArrayGeometry(num_sensors=8)


# ----------------------------------------------------------------------
# Gram-Schmidt
# ----------------------------------------------------------------------

def test_gram_schmidt_orthonormal_input_unchanged(rng):
    q, _ = np.linalg.qr(random_complex(rng, 8, 3))
    assert_allclose(gram_schmidt(q), q, atol=1e-12)


def test_gram_schmidt_hand_example():
    s = np.array([[1, 1 / np.sqrt(2)], [0, 1 / np.sqrt(2)]], dtype=complex)
    assert_allclose(gram_schmidt(s), np.eye(2), atol=1e-12)


def test_gram_schmidt_preserves_span(rng):
    s = random_complex(rng, 8, 3)
    q = gram_schmidt(s)
    assert_allclose(q.conj().T @ q, np.eye(3), atol=1e-10)
    residual = s - q @ (q.conj().T @ s)
    assert np.linalg.norm(residual) < 1e-10


def test_gram_schmidt_rank_deficient(rng):
    v = random_complex(rng, 6)
    with pytest.raises(RankDeficiencyError):
        gram_schmidt(np.column_stack([v, 2j * v]))


# ----------------------------------------------------------------------
# Lagrange multiplier
# ----------------------------------------------------------------------

@pytest.fixture
def bank8():
    return build_steering_bank(90.0, GEOMETRY_8, 2, 1.0)


def _random_state(rng, bank, **kwargs):
    state = RcbMjioState.initial(bank, 0.998, 100.0 / 8, epsilon=4.0, **kwargs)
    s_matrix = random_complex(rng, 8, bank.rank)
    base = replace(state.base, s_matrix=s_matrix, reduced_inv=random_hermitian_pd(rng, bank.rank),
                   tracker=replace(state.base.tracker, r_inv=random_hermitian_pd(rng, 8)))
    return replace(state, base=base, a_tilde=estimated_reduced_steering(s_matrix, bank))


def test_multiplier_degenerate_without_mismatch_direction(rng, bank8):
    state = _random_state(rng, bank8)
    with pytest.raises(DegenerateInputError):
        lagrange_multiplier_rcb(state, 0)


def test_multiplier_scalar_case(rng):
    bank = build_steering_bank(90.0, GEOMETRY_8, 1, 1.0)
    state = _random_state(rng, bank)
    alpha = random_complex(rng, 8)
    state = replace(state, alpha_diff=[alpha])
    s, a = state.base.s_matrix[:, 0], bank.candidates[0]
    p, a_tilde = state.base.reduced_inv[0, 0], state.a_tilde[0]
    expected = -np.real(p * a_tilde * np.vdot(a, s)) / abs(np.vdot(s, alpha)) ** 2
    assert lagrange_multiplier_rcb(state, 0) == pytest.approx(expected, rel=1e-10)


def test_multiplier_is_least_squares_minimiser(rng, bank8):
    for _ in range(20):
        state = _random_state(rng, bank8)
        s_matrix, alpha = state.base.s_matrix, state.alpha_diff[1]
        u = reduced_steering(s_matrix, alpha) * np.vdot(alpha, s_matrix[:, 1])
        v = (state.base.reduced_inv @ state.a_tilde) * np.vdot(bank8.candidates[1], s_matrix[:, 1])
        lam = lagrange_multiplier_rcb(state, 1)

        def residual(t):
            return np.linalg.norm(u * t + v)

        step = 1e-3 * max(abs(lam), 1.0)
        assert residual(lam) <= residual(lam + step)
        assert residual(lam) <= residual(lam - step)


def test_column_multipliers_substitute_zero_and_clip(rng, bank8):
    for _ in range(10):
        state = _random_state(rng, bank8)
        multipliers = column_multipliers(state)
        assert multipliers[0] == 0.0
        assert multipliers[1] == pytest.approx(max(lagrange_multiplier_rcb(state, 1), 0.0))


# ----------------------------------------------------------------------
# SG
# ----------------------------------------------------------------------

def test_sg_zero_steps_only_refresh_inverses(rng, bank8):
    state = RcbMjioState.initial(bank8, 0.998, 100.0 / 8, epsilon=4.0, mu_s=0.0, mu_a=0.0)
    after = rcb_mjio_sg_step(state, random_complex(rng, 8))
    assert_allclose(after.base.s_matrix, state.base.s_matrix)
    assert_allclose(after.a_tilde, state.a_tilde)
    assert not np.allclose(after.base.reduced_inv, state.base.reduced_inv)
    assert not np.allclose(after.base.tracker.r_inv, state.base.tracker.r_inv)


def _conjugate_derivative(f, value, index, h=1e-5):
    def shifted(delta):
        v = value.copy()
        v[index] += delta
        return f(v)
    d_re = (shifted(h) - shifted(-h)) / (2 * h)
    d_im = (shifted(1j * h) - shifted(-1j * h)) / (2 * h)
    return 0.5 * (d_re + 1j * d_im)


def test_column_gradient_matches_lagrangian(rng, bank8):
    for _ in range(50):
        s_matrix = random_complex(rng, 8, 2)
        reduced_inv = random_hermitian_pd(rng, 2)
        lam = rng.uniform(-2.0, 2.0)
        for d in range(2):
            analytic = rcb_column_gradient(s_matrix, reduced_inv, bank8, d, lam)
            numeric = np.array([
                _conjugate_derivative(lambda s: rcb_lagrangian(s, reduced_inv, bank8, lam, 4.0), s_matrix, (m, d))
                for m in range(8)
            ])
            assert np.linalg.norm(analytic - numeric) <= 1e-3 * np.linalg.norm(analytic)


def test_sg_steering_moves_monotonically_toward_sphere(make_scenario, rng):
    bank = build_steering_bank(90.0, GEOMETRY_8, 1, 1.0)
    scenario = make_scenario(8)
    generator = SnapshotGenerator(scenario)
    state = RcbMjioState.initial(bank, 0.998, scenario.delta, epsilon=1.0, mu_s=0.0, mu_a=0.05)
    s_matrix = (bank.assumed / np.linalg.norm(bank.assumed))[:, np.newaxis]
    state = replace(state, base=replace(state.base, s_matrix=s_matrix),
                    a_tilde=estimated_reduced_steering(s_matrix, bank))
    presumed = reduced_steering(s_matrix, bank.assumed)
    assert reduced_radius(s_matrix, bank, 1.0) == pytest.approx(1.0)

    distances = []
    for _ in range(50):
        state = rcb_mjio_sg_step(state, generator.draw(rng))
        distances.append(np.linalg.norm(state.a_tilde - presumed) ** 2)
    assert_allclose(state.base.s_matrix, s_matrix)
    assert all(b > a for a, b in zip(distances, distances[1:]))
    assert 0.5 < distances[-1] <= 1.0


def test_steering_gradient_vanishes_on_robust_estimate(rng):
    reduced_inv = random_hermitian_pd(rng, 2)
    presumed = random_complex(rng, 2)
    epsilon = 0.3 * np.real(np.vdot(presumed, presumed))
    a_hat, lam = reduced_rcb_solution(reduced_inv, presumed, epsilon)
    assert lam > 0
    assert np.real(np.vdot(a_hat - presumed, a_hat - presumed)) == pytest.approx(epsilon, rel=1e-8)
    assert np.linalg.norm(rcb_steering_gradient(reduced_inv, a_hat, presumed, lam)) < 1e-8
    with pytest.raises(DegenerateInputError):
        rcb_steering_gradient(reduced_inv, a_hat, presumed, 0.0)


def test_sg_constraint_holds(make_scenario, rng, bank8):
    scenario = make_scenario(8, mismatch_max_degrees=2.0)
    generator = SnapshotGenerator(scenario)
    state = RcbMjioState.initial(bank8, 0.998, scenario.delta, epsilon=4.0)
    for _ in range(300):
        state = rcb_mjio_sg_step(state, generator.draw(rng))
        assert abs(np.vdot(state.base.weights, state.a_tilde) - 1) < 1e-10
        assert np.all(np.isfinite(state.a_tilde))


# ----------------------------------------------------------------------
# RLS
# ----------------------------------------------------------------------

def test_pinv_of_zero_system(rng):
    a = random_complex(rng, 8)
    with pytest.raises(SingularSystemError):
        regularized_pinv_solve(0.0, a, 0.0, random_complex(rng, 8), a)


def test_pinv_solves_inside_the_span(rng):
    a, alpha = random_complex(rng, 8), random_complex(rng, 8)
    matrix = 2.0 * np.outer(a, a.conj()) + 0.5 * np.outer(alpha, alpha.conj())
    rhs = a * (1.5 - 0.5j)
    solution = regularized_pinv_solve(2.0, a, 0.5, alpha, rhs)
    assert_allclose(matrix @ solution, rhs, rtol=1e-6, atol=1e-6)


def test_rls_constraint_holds(make_scenario, rng, bank8):
    scenario = make_scenario(8, mismatch_max_degrees=2.0)
    generator = SnapshotGenerator(scenario)
    state = RcbMjioState.initial(bank8, 0.998, scenario.delta, epsilon=4.0)
    for _ in range(500):
        state = rcb_mjio_rls_step(state, generator.draw(rng))
        assert abs(np.vdot(state.base.weights, state.a_tilde) - 1) < 1e-10


def test_rls_gram_schmidt_keeps_orthonormal_columns(make_scenario, rng, bank8):
    scenario = make_scenario(8)
    generator = SnapshotGenerator(scenario)
    state = RcbMjioState.initial(bank8, 0.998, scenario.delta, epsilon=4.0, use_gram_schmidt=True)
    for _ in range(100):
        state = rcb_mjio_rls_step(state, generator.draw(rng))
        s_matrix = state.base.s_matrix
        assert_allclose(s_matrix.conj().T @ s_matrix, np.eye(2), atol=1e-8)


def test_rls_steering_lies_on_reduced_sphere(make_scenario, rng, bank8):
    scenario = make_scenario(8, mismatch_max_degrees=2.0)
    generator = SnapshotGenerator(scenario)
    state = RcbMjioState.initial(bank8, 0.998, scenario.delta, epsilon=1.0, loading=100.0)
    for _ in range(60):
        state = rcb_mjio_rls_step(state, generator.draw(rng))
        s_matrix = state.base.s_matrix
        offset = state.a_tilde - reduced_steering(s_matrix, bank8.assumed)
        radius = reduced_radius(s_matrix, bank8, 1.0)
        assert np.real(np.vdot(offset, offset)) == pytest.approx(radius, rel=1e-6)
        assert state.lambda_rcb > 0


@pytest.mark.parametrize('rule', COLUMN_RULES)
def test_rls_table1_trials_never_fail(table1_m64, rule):
    config = table1_m64.with_overrides(runs=20, rcb_column_rule=rule)
    manager = AlgorithmManager()
    generator = SnapshotGenerator(config)
    for trial in range(config.runs):
        mismatch_rng, snapshot_rng = trial_streams(config, 'rcb-mjio-rls', trial)
        presumed_doa = config.soi.doa_degrees + apply_mismatch(config, mismatch_rng)
        beamformer = manager.create('rcb-mjio-rls', config, presumed_doa)
        for _ in range(config.snapshots):
            weights = beamformer.process(generator.draw(snapshot_rng))
            assert np.all(np.isfinite(weights))
        assert smallest_singular_value(beamformer.s_matrix) > 1e-6
        assert 0 < beamformer.state.lambda_rcb < np.inf


def test_small_radius_does_no_harm_without_mismatch(make_scenario):
    config = make_scenario(64, epsilon=1.0, runs=10, algorithms=['mvdr-mjio-rls', 'rcb-mjio-rls'])
    traces = {t.algorithm: t.mean_sinr_db for t in run_monte_carlo(config)}
    assert traces['rcb-mjio-rls'][-1] >= traces['mvdr-mjio-rls'][-1] - 1.0


def test_initial_state_rejects_nonpositive_radius(bank8):
    with pytest.raises(ValueError):
        RcbMjioState.initial(bank8, 0.998, 1.0, epsilon=0.0)


def test_initial_state_rejects_unknown_column_rule(bank8):
    with pytest.raises(ValueError):
        RcbMjioState.initial(bank8, 0.998, 1.0, epsilon=4.0, column_rule='lsmi')


@pytest.mark.parametrize('rule', COLUMN_RULES)
def test_rls_columns_follow_the_configured_rule(make_scenario, rng, bank8, rule):
    scenario = make_scenario(8, mismatch_max_degrees=2.0)
    generator = SnapshotGenerator(scenario)
    state = RcbMjioState.initial(bank8, 0.998, scenario.delta, epsilon=4.0, column_rule=rule, loading=100.0)
    for _ in range(30):
        state = rcb_mjio_rls_step(state, generator.draw(rng))
    assert (len(state.column_lambdas) == 2) == (rule == 'capon')
    assert np.all(np.array(state.column_lambdas) >= 0)
    assert smallest_singular_value(state.base.s_matrix) > 1e-6
