import csv
import logging
from pathlib import Path
from typing import TYPE_CHECKING, List, Sequence, Union

from shared_components.exceptions import CsvEmissionError

if TYPE_CHECKING:
    from .experiment_orchestrator import SinrTrace

logger = logging.getLogger(__name__)

CSV_HEADER = ('snapshot', 'algorithm', 'mean_sinr_db', 'std_sinr_db', 'runs', 'seed')


def _fixed(value: float) -> str:
    return f"{value:.6f}"


def trace_rows(traces: Sequence['SinrTrace']) -> List[List[str]]:
    """CSV rows sorted by algorithm, then snapshot (1-based)"""

    if not traces:
        raise ValueError("no traces to emit")
    lengths = {len(t.mean_sinr_db) for t in traces}
    if len(lengths) != 1:
        raise ValueError(f"traces have differing snapshot counts {sorted(lengths)}")

    rows = []
    for trace in sorted(traces, key=lambda t: t.algorithm):
        for i, (mean, std) in enumerate(zip(trace.mean_sinr_db, trace.std_sinr_db), start=1):
            rows.append([str(i), trace.algorithm, _fixed(mean), _fixed(std), str(trace.runs), str(trace.seed)])
    return rows


def emit_csv(traces: Sequence['SinrTrace'], path: Union[str, Path]) -> Path:
    """💾 Write the SINR traces; nothing is created when validation fails"""

    rows = trace_rows(traces)
    path = Path(path)
    try:
        with path.open('w', encoding='utf-8', newline='') as handle:
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(CSV_HEADER)
            writer.writerows(rows)
    except OSError as e:
        raise CsvEmissionError(str(path), e.strerror or str(e)) from e
    logger.info(f"💾 Wrote {len(rows)} rows for {len(traces)} algorithm(s) to {path}")
    return path
