"""Topological complexity of work maps.

Exact rational cohomological lower bounds, Sullivan-model factorization
certificates for the rationalized invariant, and an executable two-link arm
planner realizing the two-region work-map cover.
"""

__version__ = "0.1.0"

from .algebra import (  # noqa: F401
    AlgebraMorphism,
    GradedAlgebra,
    WorkMap,
    cup_morphism,
    make_algebra,
    make_morphism,
    reduced_subspace,
    tensor_product,
    tensor_square,
    tensor_square_morphism,
    validate_algebra,
    work_map,
)
from .invariants import (  # noqa: F401
    BoundReport,
    bounds_report,
    cat_image_cuplength,
    formal_tc,
    nil_index,
    restricted_zero_divisors,
    secat_lower_bound,
    tc_lower_bound,
)
from .linalg import GradedBasis, Subspace, graded_basis, rref  # noqa: F401
from .sullivan import (  # noqa: F401
    cdga_cohomology,
    formal_consistency,
    homotopy_factorization,
    ideal_power,
    kernel_ideal,
    relative_model_of_quotient,
    strict_certificate,
    surjectivize,
    validate_cdga,
)
