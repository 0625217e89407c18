"""Monte Carlo driver: seeded trials, SINR traces and their aggregation."""

import hashlib
import logging
import multiprocessing
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from array_model.sinr import SinrEvaluator
from array_model.snapshots import SnapshotGenerator
from shared_components.exceptions import (
    DegenerateInputError,
    ExperimentFailedError,
    InfeasibleUncertaintyError,
    InvalidGeometryError,
    NumericalFailureError,
    TrialFailure,
)

from .algorithm_manager import AlgorithmManager
from .scenario_config import ScenarioConfig

logger = logging.getLogger(__name__)

FAILURE_TOLERANCE = 0.01

TRIAL_ERRORS = (
    NumericalFailureError,
    DegenerateInputError,
    InfeasibleUncertaintyError,
    InvalidGeometryError,
    np.linalg.LinAlgError,
)


@dataclass
class SinrTrace:
    """📈 Per-snapshot mean and spread of the output SINR for one algorithm"""
    algorithm: str
    mean_sinr_db: np.ndarray
    std_sinr_db: np.ndarray
    runs: int
    seed: int
    scenario_hash: str
    failed_trials: int = 0

    def __post_init__(self):
        self.mean_sinr_db = np.asarray(self.mean_sinr_db, dtype=float)
        self.std_sinr_db = np.asarray(self.std_sinr_db, dtype=float)
        if self.mean_sinr_db.shape != self.std_sinr_db.shape:
            raise ValueError("mean and std traces differ in length")

    @property
    def snapshots(self) -> int:
        return self.mean_sinr_db.size


# ========================================================================
# Seeded streams
# ========================================================================

def _algorithm_key(algorithm: str) -> int:
    return int.from_bytes(hashlib.sha256(algorithm.encode('utf-8')).digest()[:4], 'big')


def trial_streams(config: ScenarioConfig, algorithm: str,
                  trial_index: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """(mismatch stream, snapshot stream) for one trial

    With common random numbers every algorithm of a trial sees the same
    mismatch draw and the same snapshots; otherwise the algorithm identifier
    joins the key.
    """
    entropy = [config.seed, trial_index]
    if not config.common_random_numbers:
        entropy.append(_algorithm_key(algorithm))
    mismatch_seq, snapshot_seq = np.random.SeedSequence(entropy).spawn(2)
    return np.random.default_rng(mismatch_seq), np.random.default_rng(snapshot_seq)


def apply_mismatch(config: ScenarioConfig, rng: np.random.Generator) -> float:
    """Presumed-DoA error in degrees, uniform on [−max, +max]"""
    limit = config.mismatch_max_degrees
    if limit == 0:
        return 0.0
    return float(rng.uniform(-limit, limit))


# ========================================================================
# Trials
# ========================================================================

def run_trial(config: ScenarioConfig, algorithm: str, trial_index: int,
              evaluator: Optional[SinrEvaluator] = None,
              manager: Optional[AlgorithmManager] = None) -> np.ndarray:
    """One seeded trial: N snapshots, one output SINR (dB) after each step"""

    manager = manager or AlgorithmManager()
    evaluator = evaluator or SinrEvaluator(config)
    mismatch_rng, snapshot_rng = trial_streams(config, algorithm, trial_index)
    presumed_doa = config.soi.doa_degrees + apply_mismatch(config, mismatch_rng)

    try:
        beamformer = manager.create(algorithm, config, presumed_doa)
    except TRIAL_ERRORS as e:
        raise TrialFailure(algorithm, trial_index, None, e) from e

    generator = SnapshotGenerator(config)
    trace = np.empty(config.snapshots)
    for i in range(config.snapshots):
        x = generator.draw(snapshot_rng)
        try:
            weights = beamformer.process(x)
            if not np.all(np.isfinite(weights)):
                raise NumericalFailureError("weights became non-finite")
            trace[i] = evaluator.output_sinr(weights)
        except TRIAL_ERRORS as e:
            raise TrialFailure(algorithm, trial_index, i, e) from e
    logger.debug(f"{algorithm} trial {trial_index}: presumed DoA {presumed_doa:.4f} deg, "
                 f"final SINR {trace[-1]:.3f} dB")
    return trace


def _trial_outcome(config: ScenarioConfig, algorithm: str,
                   trial_index: int) -> Tuple[Optional[np.ndarray], Optional[str]]:
    """Pool worker: returns (trace, None) or (None, failure message)"""
    try:
        return run_trial(config, algorithm, trial_index), None
    except TrialFailure as e:
        return None, str(e)


def _aggregate(config: ScenarioConfig, algorithm: str,
               outcomes: List[Tuple[Optional[np.ndarray], Optional[str]]]) -> SinrTrace:
    traces = [trace for trace, _ in outcomes if trace is not None]
    failures = [message for _, message in outcomes if message is not None]
    if len(failures) > FAILURE_TOLERANCE * len(outcomes):
        logger.error(f"❌ {algorithm}: {len(failures)}/{len(outcomes)} trials failed; first: {failures[0]}")
        raise ExperimentFailedError(
            f"{algorithm}: {len(failures)} of {len(outcomes)} trials failed "
            f"(tolerance {FAILURE_TOLERANCE:.0%}); first failure: {failures[0]}"
        )
    for message in failures:
        logger.warning(f"⚠️ {message}")

    stacked = np.vstack(traces)
    return SinrTrace(
        algorithm=algorithm,
        mean_sinr_db=stacked.mean(axis=0),
        std_sinr_db=stacked.std(axis=0),
        runs=len(traces),
        seed=config.seed,
        scenario_hash=config.scenario_hash(),
        failed_trials=len(failures),
    )


def run_monte_carlo(config: ScenarioConfig) -> List[SinrTrace]:
    """Average ``config.runs`` independent trials per algorithm

    Results are aggregated in trial-index order, so sequential and pooled
    execution give identical traces.
    """
    tasks = [(config, algorithm, t) for algorithm in config.algorithms for t in range(config.runs)]
    if config.workers > 1:
        with multiprocessing.Pool(config.workers) as pool:
            outcomes = pool.starmap(_trial_outcome, tasks)
    else:
        outcomes = [_trial_outcome(*task) for task in tasks]

    traces = []
    for k, algorithm in enumerate(config.algorithms):
        chunk = outcomes[k * config.runs:(k + 1) * config.runs]
        trace = _aggregate(config, algorithm, chunk)
        logger.info(f"📈 {algorithm}: snapshot-{trace.snapshots} mean SINR "
                    f"{trace.mean_sinr_db[-1]:.3f} dB over {trace.runs} runs")
        traces.append(trace)
    return traces


class ExperimentOrchestrator:
    """🎭 Runs one scenario end to end and keeps run statistics"""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.evaluator = SinrEvaluator(config)
        self.run_stats: Dict[str, Any] = {
            'experiments': 0,
            'last_duration_seconds': None,
            'failed_trials': {},
            'completed_trials': {},
            'final_mean_sinr_db': {},
        }

    def optimal_sinr(self) -> float:
        return self.evaluator.optimal_sinr()

    def run(self) -> List[SinrTrace]:
        config = self.config
        logger.info(f"🚀 Scenario '{config.name}': {len(config.algorithms)} algorithm(s), "
                    f"{config.runs} runs x {config.snapshots} snapshots, seed {config.seed}, "
                    f"workers {config.workers}")
        logger.info(f"🎯 Optimal SINR {self.optimal_sinr():.3f} dB")

        start = time.perf_counter()
        traces = run_monte_carlo(config)
        duration = time.perf_counter() - start

        self.run_stats['experiments'] += 1
        self.run_stats['last_duration_seconds'] = round(duration, 3)
        self.run_stats['failed_trials'] = {t.algorithm: t.failed_trials for t in traces}
        self.run_stats['completed_trials'] = {t.algorithm: t.runs for t in traces}
        self.run_stats['final_mean_sinr_db'] = {t.algorithm: float(t.mean_sinr_db[-1]) for t in traces}
        logger.info(f"✅ Scenario '{config.name}' finished in {duration:.1f}s")
        return traces
