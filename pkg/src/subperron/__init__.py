"""Perron-Frobenius block theory for reducible non-negative integer
matrices, with applications to expanding substitutions: normalized-iterate
limits, principal eigenvectors, blow-up substitutions, factor frequencies,
and shift-invariant measures on substitution subshifts."""

from .errors import (
    CapExceededError,
    ImageOverflowError,
    ImageTooShortError,
    MaxIterError,
    NoSeedWordError,
    NotExpandingError,
    NotPBFrobeniusError,
    NotPrincipalError,
    ParseError,
    SingularSystemError,
    SubperronError,
    ZeroColumnError,
)
from .frequencies import (
    FrequencyTable,
    KirchhoffReport,
    WeightFunction,
    factor_frequencies,
    frequency_table,
    growth_rate,
    kirchhoff_check,
    letter_frequencies,
    measure_cylinder,
)
from .matrices import (
    BlockClass,
    BlockDecomposition,
    ExactMatrix,
    is_expanding,
    is_power_bounded,
    is_primitive,
    load_matrix,
    mat_pow_apply,
    parse_matrix,
    pb_frobenius_power,
    primitive_frobenius_power,
    scc_blocks,
)
from .spectral import (
    ConvergenceReport,
    GrowthType,
    PrincipalEigenvector,
    block_eigenvalues,
    classify_limit_case,
    cone_growth_type,
    dominant_interior_contains,
    eigencone_membership,
    growth_type,
    normalized_limit,
    pf_eigen_block,
    power_eigenvector_lift,
    principal_blocks,
    principal_eigenvector,
    trajectory_growth,
)
from .words import (
    Alphabet,
    FactorAlphabet,
    Substitution,
    blow_up,
    count_occurrences,
    count_occurrences_str,
    factor_alphabet,
    is_expanding_subst,
    load_substitution,
    parse_substitution,
    stabilizing_power,
    substitution_power,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BlockClass",
    "BlockDecomposition",
    "CapExceededError",
    "ConvergenceReport",
    "ExactMatrix",
    "FactorAlphabet",
    "FrequencyTable",
    "GrowthType",
    "ImageOverflowError",
    "ImageTooShortError",
    "KirchhoffReport",
    "MaxIterError",
    "NoSeedWordError",
    "NotExpandingError",
    "NotPBFrobeniusError",
    "NotPrincipalError",
    "ParseError",
    "PrincipalEigenvector",
    "SingularSystemError",
    "SubperronError",
    "Substitution",
    "WeightFunction",
    "ZeroColumnError",
    "block_eigenvalues",
    "blow_up",
    "classify_limit_case",
    "cone_growth_type",
    "count_occurrences",
    "count_occurrences_str",
    "dominant_interior_contains",
    "eigencone_membership",
    "factor_alphabet",
    "factor_frequencies",
    "frequency_table",
    "growth_rate",
    "growth_type",
    "is_expanding",
    "is_expanding_subst",
    "is_power_bounded",
    "is_primitive",
    "kirchhoff_check",
    "letter_frequencies",
    "load_matrix",
    "load_substitution",
    "mat_pow_apply",
    "measure_cylinder",
    "normalized_limit",
    "parse_matrix",
    "parse_substitution",
    "pb_frobenius_power",
    "pf_eigen_block",
    "power_eigenvector_lift",
    "primitive_frobenius_power",
    "principal_blocks",
    "principal_eigenvector",
    "scc_blocks",
    "stabilizing_power",
    "substitution_power",
    "trajectory_growth",
]
