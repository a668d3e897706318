"""Exact computations with left-symmetric and Novikov algebras."""

from .algebra import (
    Algebra, Bimodule, MorphismWitness, Split, check_bimodule, check_identity, check_morphism, commutator_lie,
    rep_of_commutator, subalgebra_test,
)
from .complements import (
    MatchedPair, brute_force_complements, check_deform_equiv, check_deformation, check_matched_pair,
    classify_complements, compare_over_field, deform, enumerate_deformations,
)
from .errors import (
    BaseAlgebraInvalid, DatumInvalid, DimensionMismatch, DivisionByZero, EnumerationTooLarge, FieldMismatch,
    LsakitError, MatchedPairInvalid, NoSolution, NotDeformationMap, NotInvertible, NotSubalgebra, ParseError,
)
from .field import QQ, FieldSpec, Scalar, mat_invert, mat_rank, mat_solve
from .flags import (
    FlagDatum, FlagEquivWitness, check_flag, check_flag_equiv, classify_flags, enumerate_flags, flag_to_datum,
)
from .report import CheckReport, Violation
from .unified import (
    DatumMorphismWitness, ExtendingDatum, check_datum_equivalence, check_datum_morphism, check_extending,
    derive_lie_datum, extract_datum, oracle_equivalence, unified_product,
)

__all__ = [
    "Algebra", "Bimodule", "MorphismWitness", "Split", "check_bimodule", "check_identity", "check_morphism",
    "commutator_lie", "rep_of_commutator", "subalgebra_test", "MatchedPair", "brute_force_complements",
    "check_deform_equiv", "check_deformation", "check_matched_pair", "classify_complements",
    "compare_over_field", "deform", "enumerate_deformations", "BaseAlgebraInvalid", "DatumInvalid",
    "DimensionMismatch", "DivisionByZero", "EnumerationTooLarge", "FieldMismatch", "LsakitError",
    "MatchedPairInvalid", "NoSolution", "NotDeformationMap", "NotInvertible", "NotSubalgebra", "ParseError",
    "QQ", "FieldSpec", "Scalar", "mat_invert", "mat_rank", "mat_solve", "FlagDatum", "FlagEquivWitness",
    "check_flag", "check_flag_equiv", "classify_flags", "enumerate_flags", "flag_to_datum", "CheckReport",
    "Violation", "DatumMorphismWitness", "ExtendingDatum", "check_datum_equivalence", "check_datum_morphism",
    "check_extending", "derive_lie_datum", "extract_datum", "oracle_equivalence", "unified_product",
]
