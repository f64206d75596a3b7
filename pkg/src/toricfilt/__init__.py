"""Exact-arithmetic toolkit for torus-equivariant principal-bundle data on
toric fans: filtration calculus with per-cone compatibility certificates,
transition gluing checks, truncated coordinate-algebra axioms, and reduction
of structure group."""

from .algebras import (
    TruncatedAlgebra,
    build_truncation,
    check_coaction_commutes,
    check_compatible_algebra,
    check_multiplicative,
)
from .bundles import (
    CocharBundleData,
    GluingReport,
    GroupSpec,
    LaurentMatrix,
    RayConsistencyError,
    associated_klyachko,
    canonical_cone_decomposition,
    check_gluing,
    cocycle_check,
    determinant_data,
    transition,
    validate_bundle,
)
from .compatibility import (
    ConeCompatibility,
    ConeDecomposition,
    GlobalCompatibilityReport,
    Refutation,
    cone_compatibility,
    exhaustive_adapted_search,
    global_compatibility,
    tensor_certificate,
    verify_cone_decomposition,
)
from .errors import InputError, PreconditionError
from .fans import (
    CharQuotient,
    Cone,
    Fan,
    NotPointedError,
    cone_from_generators,
    cone_intersection,
    dual_membership,
    perp_and_quotient,
    validate_fan,
)
from .filtrations import (
    FiltrationData,
    RayFiltration,
    change_basis,
    check_morphism,
    direct_sum,
    dual,
    morphism_failure,
    tensor,
    validate,
)
from .linalg import (
    QMatrix,
    Subspace,
    annihilator,
    complement_in,
    intersect,
    kernel,
    span_canonical,
    subspace_sum,
    tensor_product,
)
from .reduction import (
    SlReductionResult,
    TorusReductionResult,
    check_sl_reduction,
    check_torus_reduction,
)

__version__ = "0.1.0"
