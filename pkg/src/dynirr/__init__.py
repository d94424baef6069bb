"""Exact tests, censuses and enumerations of dynamically irreducible
quadratic polynomials over odd finite fields."""

__version__ = "0.1.0"

from .census import CensusResult, census_full, census_monic, full_di_list, survivor_curve
from .enumr import (
    REnumResult,
    brute_force_sets,
    enum_all,
    enum_part1,
    enum_part2,
    enum_part3,
)
from .errors import (
    ContextMismatchError,
    DegeneratePolynomialError,
    DynirrError,
    InvalidFieldError,
    ProportionalPairError,
    ResourceBudgetError,
)
from .ff import FieldCtx, parse_field
from .multiset import (
    GammaReport,
    SetVerdict,
    di_set_test,
    gamma_set,
    monic_word_uniqueness_check,
    proportional,
)
from .orbit import (
    AlgorithmParams,
    OrbitReport,
    di_test_char,
    di_test_oracle,
    orbit_stats,
)
from .quad import (
    QuadPoly,
    compose_eval,
    composition_leading_coeff,
    is_irreducible_quad,
    quad_new,
    scale,
)

__all__ = [
    "AlgorithmParams",
    "CensusResult",
    "ContextMismatchError",
    "DegeneratePolynomialError",
    "DynirrError",
    "FieldCtx",
    "GammaReport",
    "InvalidFieldError",
    "OrbitReport",
    "ProportionalPairError",
    "QuadPoly",
    "REnumResult",
    "ResourceBudgetError",
    "SetVerdict",
    "brute_force_sets",
    "census_full",
    "census_monic",
    "compose_eval",
    "composition_leading_coeff",
    "di_set_test",
    "di_test_char",
    "di_test_oracle",
    "enum_all",
    "enum_part1",
    "enum_part2",
    "enum_part3",
    "full_di_list",
    "gamma_set",
    "is_irreducible_quad",
    "monic_word_uniqueness_check",
    "orbit_stats",
    "parse_field",
    "proportional",
    "quad_new",
    "scale",
    "survivor_curve",
]
