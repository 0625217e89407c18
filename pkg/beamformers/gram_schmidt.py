import logging

import numpy as np

from shared_components.exceptions import RankDeficiencyError

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-12


def gram_schmidt(s_matrix: np.ndarray, reiterate: bool = True) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of S_D (span and column phases preserved)"""

    s_matrix = np.asarray(s_matrix, dtype=complex)
    q = np.empty_like(s_matrix)
    passes = 2 if reiterate else 1
    for k in range(s_matrix.shape[1]):
        v = s_matrix[:, k].copy()
        original_norm = np.linalg.norm(v)
        for _ in range(passes):
            for j in range(k):
                v -= q[:, j] * np.vdot(q[:, j], v)
        norm = np.linalg.norm(v)
        if norm < RANK_TOLERANCE * max(1.0, original_norm):
            raise RankDeficiencyError(f"column {k} is linearly dependent on the previous columns")
        q[:, k] = v / norm
    return q
