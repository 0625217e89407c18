# rrbeam.py
# 🎯 Reduced-rank robust beamforming experiments - command-line entry point

import argparse
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv

from core_system.complexity_model import complexity_model
from core_system.csv_emitter import emit_csv
from core_system.experiment_orchestrator import ExperimentOrchestrator
from core_system.scenario_config import ScenarioConfigManager
from shared_components.exceptions import RRBeamError, ScenarioValidationError
from shared_components.logging_config import configure_logging

logger = logging.getLogger('rrbeam')


def _algorithm_list(value: str) -> List[str]:
    return [a.strip() for a in value.split(',') if a.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='rrbeam', description='Reduced-rank robust adaptive beamforming experiments')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING or ERROR (env RRBEAM_LOG_LEVEL)')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run a Monte Carlo scenario and write the SINR CSV')
    run.add_argument('--scenario', required=True, help='scenario YAML file or bundled scenario name')
    run.add_argument('--out', required=True, help='output CSV path')
    run.add_argument('--runs', type=int, default=None)
    run.add_argument('--seed', type=int, default=None)
    run.add_argument('--algorithms', type=_algorithm_list, default=None, help='comma-separated identifiers')
    run.add_argument('--gram-schmidt', action='store_true', default=None,
                     help='orthonormalise S_D after every RCB-MJIO update')
    run.add_argument('--rank', type=int, default=None)
    run.add_argument('--workers', type=int, default=None, help='process-pool size (env RRBEAM_WORKERS)')

    complexity = commands.add_parser('complexity', help='complex multiplications per iteration')
    complexity.add_argument('--algorithm', required=True)
    complexity.add_argument('-M', dest='m', type=int, required=True)
    complexity.add_argument('-D', dest='d', type=int, required=True)

    scenarios = commands.add_parser('scenarios', help='bundled scenarios')
    scenarios.add_argument('action', choices=['list'])
    return parser


def _run(args: argparse.Namespace) -> int:
    workers = args.workers
    if workers is None and os.getenv('RRBEAM_WORKERS'):
        raw = os.getenv('RRBEAM_WORKERS')
        try:
            workers = int(raw)
        except ValueError:
            raise ScenarioValidationError(f"RRBEAM_WORKERS must be an integer, got {raw!r}") from None
    config = ScenarioConfigManager().load(args.scenario).with_overrides(
        runs=args.runs,
        seed=args.seed,
        algorithms=args.algorithms,
        gram_schmidt=args.gram_schmidt,
        rank=args.rank,
        workers=workers,
    )
    traces = ExperimentOrchestrator(config).run()
    emit_csv(traces, args.out)
    return 0


def _complexity(args: argparse.Namespace) -> int:
    try:
        count = complexity_model(args.algorithm, args.m, args.d)
    except ValueError as e:
        logger.error(f"❌ {e}")
        return 1
    print(count)
    return 0


def _scenarios(args: argparse.Namespace) -> int:
    manager = ScenarioConfigManager()
    for name in manager.list_scenarios():
        config = manager.load(name)
        print(f"{name}\tM={config.geometry.num_sensors}\tD={config.rank}\tepsilon={config.epsilon:g}")
    return 0


COMMANDS = {
    'run': _run,
    'complexity': _complexity,
    'scenarios': _scenarios,
}


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except RRBeamError as e:
        logger.error(f"❌ {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
