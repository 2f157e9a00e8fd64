"""Sliding-window shift dynamics over GF(2), verified at finite level.

The package classifies word dictionaries and the block maps they induce,
decides when two such maps admit unique completion of commuting squares,
and realizes the associated isometries as exact finite matrices so the
defining operator relations can be checked without any floating point.
"""

from .cylinder import (
    CommuteDecision,
    CylinderFunction,
    NotAFrame,
    QuadScalar,
    alpha,
    basis,
    expectation,
    inner_product,
    operator_commute_check,
    refine_frame,
    standard_frame,
    transfer,
    verify_frame,
)
from .dictionary import (
    FILTERS,
    ClassificationRecord,
    Dictionary,
    NotProgressive,
    WindowMap,
    WindowTooLarge,
    WordTooShort,
    apply_window_map,
    classify_dictionary,
    enumerate_dictionaries,
    kernel_elements,
)
from .gf2poly import (
    Factorization,
    Gf2Poly,
    ZeroPolynomial,
    poly_factor,
    poly_gcd,
    recurrence_kernel,
)
from .ledrappier import (
    BASIC_BLOCKS,
    LEDRAPPIER,
    TrianglePatch,
    complete_patch,
    conjugate_vertical,
    stack_orbit,
)
from .matrixmodel import (
    BumpReport,
    DefectReport,
    LevelOperator,
    LevelTooSmall,
    NoSeparation,
    RelationReport,
    annihilating_bump,
    expectation_defect,
    isometry_matrix,
    verify_relations,
)
from .starcomm import (
    DynamicalSystem,
    FiniteMapPair,
    IndependenceProfile,
    InvalidSystem,
    MinimalityResult,
    MonoidElement,
    NonCommutingMaps,
    StarDecision,
    SystemCertificate,
    TopFreeResult,
    certify_system,
    independence_profile,
    is_minimal,
    is_topologically_free,
    star_commute_finite,
    star_commute_windows,
    star_commutes_on_kernel,
)
from .words import PeriodicSeq, Word

__all__ = [
    "BASIC_BLOCKS",
    "BumpReport",
    "ClassificationRecord",
    "CommuteDecision",
    "CylinderFunction",
    "DefectReport",
    "Dictionary",
    "DynamicalSystem",
    "FILTERS",
    "Factorization",
    "FiniteMapPair",
    "Gf2Poly",
    "IndependenceProfile",
    "InvalidSystem",
    "LEDRAPPIER",
    "LevelOperator",
    "LevelTooSmall",
    "MinimalityResult",
    "MonoidElement",
    "NoSeparation",
    "NonCommutingMaps",
    "NotAFrame",
    "NotProgressive",
    "PeriodicSeq",
    "QuadScalar",
    "RelationReport",
    "StarDecision",
    "SystemCertificate",
    "TopFreeResult",
    "TrianglePatch",
    "WindowMap",
    "WindowTooLarge",
    "Word",
    "WordTooShort",
    "ZeroPolynomial",
    "alpha",
    "annihilating_bump",
    "apply_window_map",
    "basis",
    "certify_system",
    "classify_dictionary",
    "complete_patch",
    "conjugate_vertical",
    "enumerate_dictionaries",
    "expectation",
    "expectation_defect",
    "independence_profile",
    "inner_product",
    "is_minimal",
    "is_topologically_free",
    "isometry_matrix",
    "kernel_elements",
    "operator_commute_check",
    "poly_factor",
    "poly_gcd",
    "recurrence_kernel",
    "refine_frame",
    "stack_orbit",
    "standard_frame",
    "star_commute_finite",
    "star_commute_windows",
    "star_commutes_on_kernel",
    "transfer",
    "verify_frame",
    "verify_relations",
]
