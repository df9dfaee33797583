"""Trigonometric moment bodies as faces of qubit-qudit separable states."""

from .linalg import (
    BipartiteState,
    DimensionError,
    NumericalError,
    Subspace,
    is_psd,
    kernel,
    kron,
    numerical_rank,
    partial_transpose,
    range_space,
    subspace_contains,
    subspace_leq,
)
from .mobius import (
    CP1Point,
    Circle,
    Empty,
    Line,
    PointPair,
    SinglePoint,
    SingularMatrixError,
    circle_from_matrix,
    is_circle_form,
    matrix_from_circle,
    mobius_solution_set,
)
from .faces import (
    G33Face,
    G34,
    G43,
    H33,
    FaceDescriptor,
    Intersection,
    conjugate_map,
    extreme_in_max_face,
    face_membership,
    intersect_G34_G34,
    intersect_G34_G43,
    pure_product_state,
    rank_of_vector,
    unique_partner,
    vector_as_matrix,
)
from .moment_body import (
    AtomicMeasure,
    CanonicalPair,
    Classification,
    ExteriorPointError,
    MembershipResult,
    MomentBodyState,
    canonical_pair,
    curve_point,
    curve_point_mn,
    decompose,
    decompose_through,
    face_from_atoms,
    interior_point,
    is_simplex,
    membership,
    membership_C4,
    moment_surface,
    product_vector_solutions,
    real_moment_curve_point,
    state_from_moments,
    toeplitz_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteState",
    "DimensionError",
    "NumericalError",
    "Subspace",
    "is_psd",
    "kernel",
    "kron",
    "numerical_rank",
    "partial_transpose",
    "range_space",
    "subspace_contains",
    "subspace_leq",
    "CP1Point",
    "Circle",
    "Empty",
    "Line",
    "PointPair",
    "SinglePoint",
    "SingularMatrixError",
    "circle_from_matrix",
    "is_circle_form",
    "matrix_from_circle",
    "mobius_solution_set",
    "G33Face",
    "G34",
    "G43",
    "H33",
    "FaceDescriptor",
    "Intersection",
    "conjugate_map",
    "extreme_in_max_face",
    "face_membership",
    "intersect_G34_G34",
    "intersect_G34_G43",
    "pure_product_state",
    "rank_of_vector",
    "unique_partner",
    "vector_as_matrix",
    "AtomicMeasure",
    "CanonicalPair",
    "Classification",
    "ExteriorPointError",
    "MembershipResult",
    "MomentBodyState",
    "canonical_pair",
    "curve_point",
    "curve_point_mn",
    "decompose",
    "decompose_through",
    "face_from_atoms",
    "interior_point",
    "is_simplex",
    "membership",
    "membership_C4",
    "moment_surface",
    "product_vector_solutions",
    "real_moment_curve_point",
    "state_from_moments",
    "toeplitz_oracle",
]
