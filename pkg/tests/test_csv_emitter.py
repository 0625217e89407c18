import csv

import numpy as np
import pytest

from core_system.csv_emitter import CSV_HEADER, emit_csv
from core_system.experiment_orchestrator import SinrTrace
from shared_components.exceptions import CsvEmissionError


def _trace(algorithm, means, stds=None, runs=10, seed=3):
    stds = stds if stds is not None else [0.0] * len(means)
    return SinrTrace(algorithm=algorithm, mean_sinr_db=means, std_sinr_db=stds,
                     runs=runs, seed=seed, scenario_hash='abc')


def test_single_algorithm_rows(tmp_path):
    path = emit_csv([_trace('mvdr-rls', [1.5, 2.25], [0.1, 0.2])], tmp_path / 'out.csv')
    lines = path.read_bytes().decode('utf-8').split('\n')
    assert lines == [
        'snapshot,algorithm,mean_sinr_db,std_sinr_db,runs,seed',
        '1,mvdr-rls,1.500000,0.100000,10,3',
        '2,mvdr-rls,2.250000,0.200000,10,3',
        '',
    ]


def test_rows_sorted_by_algorithm_then_snapshot(tmp_path):
    traces = [_trace('mvdr-rls', [1.0, 2.0, 3.0]), _trace('krylov-rls', [4.0, 5.0, 6.0])]
    with open(emit_csv(traces, tmp_path / 'out.csv'), newline='') as handle:
        rows = list(csv.reader(handle))
    assert tuple(rows[0]) == CSV_HEADER
    keys = [(r[1], int(r[0])) for r in rows[1:]]
    assert keys == sorted(keys)
    assert keys[0] == ('krylov-rls', 1)


def test_round_trip_within_print_precision(tmp_path, rng):
    means = rng.normal(10.0, 5.0, size=7)
    stds = rng.uniform(0.0, 2.0, size=7)
    path = emit_csv([_trace('rcb-mjio-rls', means, stds)], tmp_path / 'out.csv')
    with open(path, newline='') as handle:
        rows = list(csv.DictReader(handle))
    np.testing.assert_allclose([float(r['mean_sinr_db']) for r in rows], means, atol=1e-6)
    np.testing.assert_allclose([float(r['std_sinr_db']) for r in rows], stds, atol=1e-6)


def test_empty_trace_list_creates_nothing(tmp_path):
    path = tmp_path / 'out.csv'
    with pytest.raises(ValueError):
        emit_csv([], path)
    assert not path.exists()


def test_mixed_lengths_rejected(tmp_path):
    path = tmp_path / 'out.csv'
    with pytest.raises(ValueError):
        emit_csv([_trace('a', [1.0]), _trace('b', [1.0, 2.0])], path)
    assert not path.exists()


def test_io_error_carries_path(tmp_path):
    path = tmp_path / 'missing' / 'out.csv'
    with pytest.raises(CsvEmissionError) as info:
        emit_csv([_trace('mvdr-rls', [1.0])], path)
    assert info.value.path == str(path)
    assert str(path) in str(info.value)
