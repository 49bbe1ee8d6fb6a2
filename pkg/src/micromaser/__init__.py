"""One-atom micromaser: steady-state photon statistics, two-atom
entanglement and cavity entropy transfer."""

__version__ = "0.1.0"

from .errors import (IntegrationError, InvalidParameterError, MicromaserError,
                     SolveError, TruncationError)
from .fock import (PhotonDistribution, mean_and_variance, rabi_cos, rabi_sin,
                   shannon_entropy, thermal_distribution, variance_ratio)
from .steady_state import (MaserParams, coarse_grained_steady_state, damped_gain_map,
                           damping_generator, fjm_steady_state, steady_state,
                           unitary_gain_map)
from .entangle import (EntanglementReport, TwoAtomState, analyze, concurrence,
                       density_matrix, entanglement_of_formation, horodecki_m,
                       two_atom_state)
from .transfer import (SweepRow, entropy_transfer, evaluate_point,
                       post_passage_distribution, sweep_D, sweep_kappa)
