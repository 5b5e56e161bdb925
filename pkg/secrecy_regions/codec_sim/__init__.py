from .codebook import Codebook, codebook_size, generate_codebook
from .maximal_error import (
    ErrorMatrix,
    ExpurgationReport,
    PermutationReport,
    expurgate,
    expurgated_rate,
    load_error_matrix,
    permutation_scheme,
    synthetic_error_matrix,
)
from .secrecy import (
    CodingContext,
    KeyCodebook,
    SecrecyDiagnostics,
    SecurityReport,
    covering_trial,
    delta_excess,
    delta_star,
    excess_trial,
    eve_state,
    generate_key_codebook,
    secrecy_diagnostics,
    security_level,
)
from .type_classes import SchmidtData, TypeDecomposition, conditional_types, schmidt_decompose
from .weyl import GammaKey, heisenberg_weyl, key_space_size, keyed_unitary

__all__ = [
    "Codebook",
    "CodingContext",
    "ErrorMatrix",
    "ExpurgationReport",
    "GammaKey",
    "KeyCodebook",
    "PermutationReport",
    "SchmidtData",
    "SecrecyDiagnostics",
    "SecurityReport",
    "TypeDecomposition",
    "codebook_size",
    "conditional_types",
    "covering_trial",
    "delta_excess",
    "delta_star",
    "eve_state",
    "excess_trial",
    "expurgate",
    "expurgated_rate",
    "generate_codebook",
    "generate_key_codebook",
    "heisenberg_weyl",
    "key_space_size",
    "keyed_unitary",
    "load_error_matrix",
    "permutation_scheme",
    "schmidt_decompose",
    "secrecy_diagnostics",
    "security_level",
    "synthetic_error_matrix",
]
