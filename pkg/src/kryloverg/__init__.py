"""Krylov-basis ergodicity of unitary evolutions and spectral chaos diagnostics."""

__version__ = "0.1.0"

from .arnoldi import (
    KrylovDecomposition,
    alpha_coefficients,
    arnoldi_iterate,
    brute_force_krylov,
    decomposition_to_json,
    verify_sequence_identity,
)
from .chaostats import (
    EigenvectorStatsResult,
    GapRatioResult,
    R_MEAN_GOE,
    R_MEAN_POISSON,
    delta_ks,
    goe_component_cdf,
    r_ratio_mean,
)
from .ergodicity import (
    ErgodicityReport,
    autocorrelator,
    erg_measure,
    ergodic_target,
    ergodicity_report,
    level_uniformity,
    sequence_asymptotics,
)
from .harness import (
    SweepConfig,
    SweepResult,
    load_config,
    rescale,
    run_sweep,
    validate_config,
    write_outputs,
)
from .matrixcore import (
    SpectralData,
    UnitaryMatrix,
    certify_unitary,
    eigenphases_from_energies,
    frobenius_distance,
    hermitian_eigendecompose,
    unitary_eigenphases,
    unitary_from_hamiltonian,
    unitary_from_spectral,
    wrap_phases,
)
from .models import (
    ChainParams,
    RmtParams,
    TrotterParams,
    chain_hamiltonian,
    haar_random_state,
    initial_state,
    interaction_eigenbasis,
    parity_operator,
    parity_sector_basis,
    parity_sector_dim,
    rmt_hamiltonian,
    spectral_weight,
    trotter_unitary,
)

__all__ = [
    "KrylovDecomposition",
    "alpha_coefficients",
    "arnoldi_iterate",
    "brute_force_krylov",
    "decomposition_to_json",
    "verify_sequence_identity",
    "EigenvectorStatsResult",
    "GapRatioResult",
    "R_MEAN_GOE",
    "R_MEAN_POISSON",
    "delta_ks",
    "goe_component_cdf",
    "r_ratio_mean",
    "ErgodicityReport",
    "autocorrelator",
    "erg_measure",
    "ergodic_target",
    "ergodicity_report",
    "level_uniformity",
    "sequence_asymptotics",
    "SweepConfig",
    "SweepResult",
    "load_config",
    "rescale",
    "run_sweep",
    "validate_config",
    "write_outputs",
    "SpectralData",
    "UnitaryMatrix",
    "certify_unitary",
    "eigenphases_from_energies",
    "frobenius_distance",
    "hermitian_eigendecompose",
    "unitary_eigenphases",
    "unitary_from_hamiltonian",
    "unitary_from_spectral",
    "wrap_phases",
    "ChainParams",
    "RmtParams",
    "TrotterParams",
    "chain_hamiltonian",
    "haar_random_state",
    "initial_state",
    "interaction_eigenbasis",
    "parity_operator",
    "parity_sector_basis",
    "parity_sector_dim",
    "rmt_hamiltonian",
    "spectral_weight",
    "trotter_unitary",
]
