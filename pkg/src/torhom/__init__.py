"""Exact-arithmetic topology of smooth toric varieties.

Given a regular fan, compute integral cohomology with its exterior-algebra
module structure, Borel-Moore homology with its bidegree decomposition, the
cup product for subfans of the (P^1)^r fan, and Chow groups, all over Z or
Z/m and all cross-checkable against independent pipelines.
"""

__version__ = "0.1.0"

from .borel_moore import (
    BMHomologyTable,
    ChowTable,
    CSigmaComplex,
    bm_homology,
    build_c_sigma,
    chow_groups,
    chow_presentation_oracle,
    cycle_map_check,
    duality_map,
)
from .cohomology import (
    CohomologyClass,
    CohomologyTable,
    DegreeOverflow,
    NotP1RSubfan,
    build_full_complex,
    build_small_complex,
    cohomology,
    cup,
    lambda_action,
    quasi_iso_check,
)
from .exterior import (
    Form,
    Multivector,
    RankMismatch,
    cap,
    contract,
    contract_by,
    evaluate,
    wedge,
)
from .fans import (
    Fan,
    FanFormatError,
    InvalidFan,
    NotAFacet,
    ConeNotInFan,
    OrientationData,
    QuotientContext,
    ValidationReport,
    classify,
    cox,
    dump_fan,
    facets,
    load_fan,
    orientation_sign,
    validate,
)
from .intlinalg import (
    HomologyGroup,
    IntMatrix,
    NotAComplex,
    NotUnimodular,
    SnfDecomposition,
    basis_completion,
    homology_of_pair,
    snf,
)
from .stanley_reisner import SRMonomial, linear_form_image, sr_basis, sr_multiply

__all__ = [
    "BMHomologyTable",
    "ChowTable",
    "CSigmaComplex",
    "CohomologyClass",
    "CohomologyTable",
    "ConeNotInFan",
    "DegreeOverflow",
    "Fan",
    "FanFormatError",
    "Form",
    "HomologyGroup",
    "IntMatrix",
    "InvalidFan",
    "Multivector",
    "NotAComplex",
    "NotAFacet",
    "NotP1RSubfan",
    "NotUnimodular",
    "OrientationData",
    "QuotientContext",
    "RankMismatch",
    "SRMonomial",
    "SnfDecomposition",
    "ValidationReport",
    "basis_completion",
    "bm_homology",
    "build_c_sigma",
    "build_full_complex",
    "build_small_complex",
    "cap",
    "chow_groups",
    "chow_presentation_oracle",
    "classify",
    "cohomology",
    "contract",
    "contract_by",
    "cox",
    "cup",
    "cycle_map_check",
    "duality_map",
    "dump_fan",
    "evaluate",
    "facets",
    "homology_of_pair",
    "lambda_action",
    "linear_form_image",
    "load_fan",
    "orientation_sign",
    "quasi_iso_check",
    "snf",
    "sr_basis",
    "sr_multiply",
    "validate",
    "wedge",
]
