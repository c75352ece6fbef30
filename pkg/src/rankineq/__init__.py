"""Characteristic-dependent linear rank inequalities from binary guide matrices.

Generate the guided inequality families, evaluate them exactly as
subspace entropies over prime fields, and verify or refute them by
randomized and exhaustive search.
"""

from .errors import (
    CapExceeded,
    DimensionMismatch,
    InadmissibleGuide,
    NonSquare,
    ParamOutOfRange,
    ParseError,
    RankineqError,
    UnknownVariable,
)
from .expr import (
    RankExpr,
    Rational,
    TaggedInequality,
    Validity,
    ZERO,
    cmi,
    cond_h,
    h,
    mi,
)
from .generate import (
    FamilyDescriptor,
    count_independent,
    gen_example_a,
    gen_example_b,
    gen_family,
    gen_theorem_i,
    gen_theorem_ii,
    ingleton,
    nabla_c,
    nabla_vars,
)
from .gf import MatrixGF, PrimeField, det_mod, rank, rref, stack_rows
from .guide import (
    ColumnClasses,
    GuideMatrix,
    build_example_guide,
    check_rank_profile,
    classify_columns,
    parse_guide_text,
    projection_rank_identity,
    rank_over,
)
from .subspace import (
    Assignment,
    Subspace,
    cond_entropy,
    cond_mutual_info,
    joint_entropy,
    mutual_info,
    subspace_span,
)
from .verify import (
    DEFAULT_SEED,
    SamplingPolicy,
    TrialReport,
    Violation,
    canonical_assignment,
    exhaustive_verify,
    random_subspace,
    refute,
    sample_verify,
    zeroed_variable_check,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "CapExceeded",
    "ColumnClasses",
    "DEFAULT_SEED",
    "DimensionMismatch",
    "FamilyDescriptor",
    "GuideMatrix",
    "InadmissibleGuide",
    "MatrixGF",
    "NonSquare",
    "ParamOutOfRange",
    "ParseError",
    "PrimeField",
    "RankExpr",
    "Rational",
    "RankineqError",
    "SamplingPolicy",
    "Subspace",
    "TaggedInequality",
    "TrialReport",
    "UnknownVariable",
    "Validity",
    "Violation",
    "ZERO",
    "build_example_guide",
    "canonical_assignment",
    "check_rank_profile",
    "classify_columns",
    "cmi",
    "cond_entropy",
    "cond_h",
    "cond_mutual_info",
    "count_independent",
    "det_mod",
    "exhaustive_verify",
    "gen_example_a",
    "gen_example_b",
    "gen_family",
    "gen_theorem_i",
    "gen_theorem_ii",
    "h",
    "ingleton",
    "joint_entropy",
    "mi",
    "mutual_info",
    "nabla_c",
    "nabla_vars",
    "parse_guide_text",
    "projection_rank_identity",
    "random_subspace",
    "rank",
    "rank_over",
    "refute",
    "rref",
    "sample_verify",
    "stack_rows",
    "subspace_span",
    "zeroed_variable_check",
]
