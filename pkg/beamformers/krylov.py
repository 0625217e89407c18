"""Non-orthogonal Krylov rank reduction [a, R·a, …, R^(D−1)·a]."""

import logging

import numpy as np

from shared_components.exceptions import RankDeficiencyError

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10


def krylov_projection(r_hat: np.ndarray, a: np.ndarray, d: int) -> np.ndarray:
    """M×D matrix of unit-norm (but not orthogonalised) Krylov columns"""

    m = a.size
    if not 1 <= d <= m:
        raise ValueError(f"rank {d} must lie in [1, {m}]")
    columns = np.empty((m, d), dtype=complex)
    v = np.asarray(a, dtype=complex)
    for k in range(d):
        if k:
            v = r_hat @ columns[:, k - 1]
        norm = np.linalg.norm(v)
        if norm == 0:
            raise RankDeficiencyError(f"Krylov column {k} vanished")
        columns[:, k] = v / norm
    if d > 1:
        singular = np.linalg.svd(columns, compute_uv=False)
        if singular[-1] < RANK_TOLERANCE * singular[0]:
            raise RankDeficiencyError(
                f"Krylov columns are collinear (smallest singular value {singular[-1]:.3e}); "
                f"a is an eigenvector of R"
            )
    return columns
