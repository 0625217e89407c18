from .adaptive import BEAMFORMER_CLASSES
from .base_beamformer import BaseBeamformer
from .baselines import FullRankState, fullrank_rls_step, fullrank_sg_step, fullrank_smi_step, mvdr_weights, smi_weights
from .gram_schmidt import gram_schmidt
from .krylov import krylov_projection
from .mjio import MjioState, constraint_projector, mjio_rls_step, mjio_sg_step, reduced_steering
from .rcb import rcb_fullrank, rcb_steering
from .rcb_mjio import RcbMjioState, lagrange_multiplier_rcb, rcb_mjio_rls_step, rcb_mjio_sg_step
from .steering_bank import SteeringBank, build_steering_bank

__all__ = [
    'BEAMFORMER_CLASSES', 'BaseBeamformer',
    'FullRankState', 'fullrank_rls_step', 'fullrank_sg_step', 'fullrank_smi_step', 'mvdr_weights', 'smi_weights',
    'gram_schmidt', 'krylov_projection',
    'MjioState', 'constraint_projector', 'mjio_rls_step', 'mjio_sg_step', 'reduced_steering',
    'rcb_fullrank', 'rcb_steering',
    'RcbMjioState', 'lagrange_multiplier_rcb', 'rcb_mjio_rls_step', 'rcb_mjio_sg_step',
    'SteeringBank', 'build_steering_bank',
]
