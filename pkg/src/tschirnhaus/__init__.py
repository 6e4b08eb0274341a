"""Tschirnhaus transformations, Sylvester's method of obliteration, and
constructive linear subspaces of hypersurfaces, with solve-degree
certificates for every pipeline."""

from .errors import (
    AmbientTooSmall,
    CommonComponent,
    DomainError,
    EmptyGCD,
    GenericityFailure,
    IdenticallyZero,
    IllConditioned,
    NonConvergence,
    QNotOnSystem,
    RankCollapse,
    TschirnhausError,
)
from .numeric import (
    PrecisionConfig,
    UniPoly,
    gcd_univariate,
    kernel_basis,
    newton_e_from_p,
    newton_p_from_e,
    roots_univariate,
)
from .multipoly import (
    BiPoly,
    LinearMap,
    MultiPoly,
    interpolate_homogeneous,
    polarize_quadratic,
    quadric_from_gram,
    resultant_bivariate,
    substitute_linear,
)
from .transform import (
    CoefficientFamily,
    CoefficientFunctional,
    MonicPoly,
    Transformation,
    coefficient_functional,
    companion_matrix,
    leading_coefficients,
    recover_roots,
    solve_monic,
    transform,
)
from .obliteration import (
    DegreeProfile,
    PolySystem,
    ProjLine,
    ProjPoint,
    SolveLog,
    derived_system,
    existence_bound_k_plane,
    find_line,
    find_point,
    line_bound,
    point_bound,
)
from .subspaces import (
    LinearSubspace,
    QuadricPencil,
    intersect_plane_curves,
    isotropic_subspace,
    line_on_cubic,
    line_on_quadric_surface,
    line_on_two_quadrics_P4,
    plane_on_cubic_segre,
    plane_on_cubic_strict,
)
from .pipeline import (
    BringForm,
    Certificate,
    bring_reduce,
    quintic_solve_demo,
    remove5,
    remove_terms_generic,
    verify_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "AmbientTooSmall", "BiPoly", "BringForm", "Certificate",
    "CoefficientFamily", "CoefficientFunctional", "CommonComponent",
    "DegreeProfile", "DomainError", "EmptyGCD", "GenericityFailure",
    "IdenticallyZero", "IllConditioned", "LinearMap", "LinearSubspace",
    "MonicPoly", "MultiPoly", "NonConvergence", "PolySystem",
    "PrecisionConfig", "ProjLine", "ProjPoint", "QNotOnSystem",
    "QuadricPencil", "RankCollapse", "SolveLog", "Transformation",
    "TschirnhausError", "UniPoly", "bring_reduce", "coefficient_functional",
    "companion_matrix", "derived_system", "existence_bound_k_plane",
    "find_line", "find_point", "gcd_univariate", "intersect_plane_curves",
    "interpolate_homogeneous", "isotropic_subspace", "kernel_basis",
    "leading_coefficients", "line_bound", "line_on_cubic",
    "line_on_quadric_surface", "line_on_two_quadrics_P4", "newton_e_from_p",
    "newton_p_from_e", "plane_on_cubic_segre", "plane_on_cubic_strict",
    "point_bound", "polarize_quadratic", "quadric_from_gram",
    "quintic_solve_demo", "recover_roots", "remove5", "remove_terms_generic",
    "resultant_bivariate", "roots_univariate", "solve_monic",
    "substitute_linear", "transform", "verify_certificate",
]
