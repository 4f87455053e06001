"""lieharm: harmonic and biharmonic analysis of Lie-algebra homomorphisms.

A toolkit for Riemannian Lie groups studied through their Lie algebras:
Levi-Civita products, tension and bitension fields of homomorphisms,
harmonic cones of left-invariant metrics, conjugation harmonicity, and
constructions of (bi)harmonic Riemannian submersions from semidirect data.
Supports float and exact rational arithmetic, with every computation
cross-checked against an independent dual formula where one exists.
"""

from ._linalg import (
    DEFAULT_TOL,
    ExactModeUnsupported,
    InfeasibleSystem,
    LinAlgDomainError,
    Tolerance,
)
from .core import (
    CrossCheckError,
    EuclideanLieAlgebra,
    InnerProduct,
    LeviCivitaProduct,
    LieAlgebra,
    MetricError,
    StructureError,
    Subalgebra,
    check_jacobi,
    jacobi_defect,
    quotient_metric,
    second_fundamental,
)
from .maps import (
    KahlerStructure,
    LieAlgebraMap,
    MapClassification,
    MapError,
    SubmersionSplit,
    bitension,
    check_composition,
    check_kahler,
    classify,
    compose,
    connection_trace,
    holomorphic_defect,
    is_holomorphic,
    is_riemannian_immersion,
    is_riemannian_submersion,
    kahler_defects,
    require_hom,
    riemannian_immersion_defect,
    riemannian_submersion_defect,
    submersion_defects,
    submersion_split,
    tension,
    validate_hom,
)
from .cone import (
    Automorphism,
    ConeError,
    ConeResult,
    automorphism_trace_form,
    cone_membership,
    exp_adjoint,
    harmonic_cone,
    harmonic_dimension_check,
    inner_tension,
    sl2_adjoint_matrix,
    sl2_residuals,
)
from .semidirect import (
    ConditionReport,
    ConstructionError,
    ConstructionResult,
    InfeasibleSearch,
    SemidirectData,
    action_trace_vector,
    build_biharmonic_submersion,
    build_flat_target_submersion,
    build_harmonic_submersion,
    build_riemannian_biharmonic,
    build_semidirect,
    check_condition,
    derivation_defect,
    inner_action_data,
    tangent_semidirect,
    tension_coordinate_system,
)
from .catalog import (
    CatalogEntry,
    CatalogError,
    SuiteReport,
    get,
    names,
    run_verification_suite,
)
from .io import (
    SpecError,
    algebra_to_doc,
    load_algebra,
    load_map,
    load_semidirect,
    map_to_doc,
    save_algebra,
    semidirect_to_doc,
)

__version__ = "1.0.0"

__all__ = [
    "DEFAULT_TOL", "Tolerance", "LinAlgDomainError", "InfeasibleSystem",
    "ExactModeUnsupported",
    "LieAlgebra", "InnerProduct", "EuclideanLieAlgebra", "LeviCivitaProduct",
    "Subalgebra", "check_jacobi", "jacobi_defect", "second_fundamental",
    "quotient_metric", "StructureError", "MetricError", "CrossCheckError",
    "LieAlgebraMap", "MapError", "MapClassification", "SubmersionSplit",
    "KahlerStructure", "tension", "bitension", "connection_trace", "classify",
    "validate_hom", "require_hom", "compose", "check_composition",
    "riemannian_immersion_defect", "riemannian_submersion_defect",
    "is_riemannian_immersion", "is_riemannian_submersion", "submersion_split",
    "submersion_defects", "check_kahler", "kahler_defects",
    "holomorphic_defect", "is_holomorphic",
    "Automorphism", "ConeError", "ConeResult", "exp_adjoint",
    "automorphism_trace_form", "inner_tension", "sl2_adjoint_matrix",
    "sl2_residuals", "harmonic_cone", "harmonic_dimension_check",
    "cone_membership",
    "SemidirectData", "ConditionReport", "ConstructionError",
    "ConstructionResult", "InfeasibleSearch", "check_condition",
    "build_semidirect", "action_trace_vector", "inner_action_data",
    "tangent_semidirect", "derivation_defect", "tension_coordinate_system",
    "build_harmonic_submersion", "build_biharmonic_submersion",
    "build_riemannian_biharmonic", "build_flat_target_submersion",
    "CatalogEntry", "CatalogError", "SuiteReport", "get", "names",
    "run_verification_suite",
    "SpecError", "load_algebra", "save_algebra", "load_map",
    "load_semidirect", "algebra_to_doc", "map_to_doc", "semidirect_to_doc",
    "__version__",
]
