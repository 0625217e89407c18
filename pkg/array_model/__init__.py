from .geometry import ArrayGeometry, SourceSpec, steering_vector, steering_matrix
from .snapshots import Snapshot, SnapshotGenerator, generate_snapshot, as_vector, circular_gaussian
from .covariance_tracker import CovarianceTracker, update_covariance, riccati_update, hermitian_part
from .sinr import SinrEvaluator, analytic_covariances, output_sinr, optimal_sinr, SINR_FLOOR_DB

__all__ = [
    'ArrayGeometry',
    'SourceSpec',
    'steering_vector',
    'steering_matrix',
    'Snapshot',
    'SnapshotGenerator',
    'generate_snapshot',
    'as_vector',
    'circular_gaussian',
    'CovarianceTracker',
    'update_covariance',
    'riccati_update',
    'hermitian_part',
    'SinrEvaluator',
    'analytic_covariances',
    'output_sinr',
    'optimal_sinr',
    'SINR_FLOOR_DB',
]
