"""chainrecon: recover hopping-chain couplings from spectral data and
quantify the estimation error caused by unknown longer-range couplings."""

__version__ = "0.1.0"

from .analysis import (
    AnsatzParams,
    CriticalLengthResult,
    ErrorProfile,
    ansatz_bound,
    critical_length,
    critical_length_sweep,
    error_profile,
    topology_compare,
)
from .ensemble import (
    EnsembleConfig,
    TopologySpec,
    derive_instance_rng,
    sample_chain,
    sample_instance,
    sample_nnn,
    sample_random_edges,
)
from .errors import ConvergenceError, UnsupportedSizeError, ValidationError
from .estimation import (
    ExtendedReconstructionResult,
    ReconstructionResult,
    estimation_errors,
    reconstruct_nearest_neighbor,
    reconstruct_next_nearest,
)
from .graph import (
    CouplingGraph,
    is_zero_forcing_set,
    minimum_zero_forcing_number,
    zero_forcing_closure,
)
from .model import (
    ChainSpec,
    PerturbationSpec,
    build_chain_hamiltonian,
    build_perturbed_hamiltonian,
    dump_spec,
    load_spec,
    nnn_perturbation,
    spec_from_dict,
    spec_to_dict,
)
from .spectral import SpectralData, eigendecompose, moment, site_overlaps

__all__ = [
    "__version__",
    "AnsatzParams",
    "ChainSpec",
    "ConvergenceError",
    "CouplingGraph",
    "CriticalLengthResult",
    "EnsembleConfig",
    "ErrorProfile",
    "ExtendedReconstructionResult",
    "PerturbationSpec",
    "ReconstructionResult",
    "SpectralData",
    "TopologySpec",
    "UnsupportedSizeError",
    "ValidationError",
    "ansatz_bound",
    "build_chain_hamiltonian",
    "build_perturbed_hamiltonian",
    "critical_length",
    "critical_length_sweep",
    "derive_instance_rng",
    "dump_spec",
    "eigendecompose",
    "error_profile",
    "estimation_errors",
    "is_zero_forcing_set",
    "load_spec",
    "minimum_zero_forcing_number",
    "moment",
    "nnn_perturbation",
    "reconstruct_nearest_neighbor",
    "reconstruct_next_nearest",
    "sample_chain",
    "sample_instance",
    "sample_nnn",
    "sample_random_edges",
    "site_overlaps",
    "spec_from_dict",
    "spec_to_dict",
    "topology_compare",
    "zero_forcing_closure",
]
