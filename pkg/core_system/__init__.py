from .algorithm_manager import ALGORITHM_IDS, AlgorithmManager
from .complexity_model import complexity_model
from .csv_emitter import emit_csv
from .experiment_orchestrator import ExperimentOrchestrator, SinrTrace, apply_mismatch, run_monte_carlo, run_trial
from .scenario_config import ScenarioConfig, ScenarioConfigManager, load_scenario

__all__ = [
    'ALGORITHM_IDS', 'AlgorithmManager', 'complexity_model', 'emit_csv',
    'ExperimentOrchestrator', 'SinrTrace', 'apply_mismatch', 'run_monte_carlo', 'run_trial',
    'ScenarioConfig', 'ScenarioConfigManager', 'load_scenario',
]
