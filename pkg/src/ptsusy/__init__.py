"""Trigonometric Poschl-Teller SUSY hierarchy: spectra, eigenfunctions,
factorization operators, and coherent states, with verification oracles.
"""

from .coherent import (
    CoherentState,
    PhasePoint,
    cs_normalization,
    cs_overlap,
    eval_cs,
    identity_gram_projection,
    master_integral,
    resolution_kernel,
)
from .errors import (
    DegreeCapError,
    DomainError,
    LossOfSignificanceError,
    NonFiniteIntegrandError,
    PoleError,
    StepUnderflowError,
    SubdivisionLimitError,
    TailBoundError,
)
from .operators import (
    IdentityResult,
    SuperPotential,
    apply_A,
    apply_B_chain,
    apply_word,
    hamiltonian_apply,
    potential,
    superpotential,
    verify_operator_identities,
)
from .quadrature import QuadratureConfig, derivative, integrate_interval, integrate_real_line
from .spectrum import (
    LevelIndex,
    ModelParams,
    energy,
    gap_factor_M,
    gap_factor_N,
    ground_energy,
    phase_alpha,
)
from .wavefn import (
    EigenFunction,
    eigenfunction,
    eval_eigenfunction,
    eval_eigenfunction_derivative,
    gram_matrix,
    hierarchy_eigenfunction,
    normalization_K,
    partner_eigenfunction_explicit,
)

__version__ = "0.1.0"

__all__ = [
    "CoherentState",
    "DegreeCapError",
    "DomainError",
    "EigenFunction",
    "IdentityResult",
    "LevelIndex",
    "LossOfSignificanceError",
    "ModelParams",
    "NonFiniteIntegrandError",
    "PhasePoint",
    "PoleError",
    "QuadratureConfig",
    "StepUnderflowError",
    "SubdivisionLimitError",
    "SuperPotential",
    "TailBoundError",
    "apply_A",
    "apply_B_chain",
    "apply_word",
    "cs_normalization",
    "cs_overlap",
    "derivative",
    "eigenfunction",
    "energy",
    "eval_cs",
    "eval_eigenfunction",
    "eval_eigenfunction_derivative",
    "gap_factor_M",
    "gap_factor_N",
    "gram_matrix",
    "ground_energy",
    "hamiltonian_apply",
    "hierarchy_eigenfunction",
    "identity_gram_projection",
    "integrate_interval",
    "integrate_real_line",
    "master_integral",
    "normalization_K",
    "partner_eigenfunction_explicit",
    "phase_alpha",
    "potential",
    "resolution_kernel",
    "superpotential",
    "verify_operator_identities",
    "__version__",
]
