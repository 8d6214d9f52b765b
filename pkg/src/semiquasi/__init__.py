"""Exact classification of semiquasihomogeneous singularities with a fixed principal part."""
from .scalars import Cyclotomic, format_scalar
from .polynomial import Polynomial, WeightSystem, parse_polynomial, principal_part
from .standard_basis import (
    LocalOrder,
    StandardBasis,
    TruncationError,
    hessian_socle,
    milnor_basis,
    monomial_basis,
    mora_reduce,
    standard_basis,
)
from .unfolding import NegativeUnfolding, negative_unfolding, reduce_to_T_minus, specialize
from .kodaira_spencer import (
    VectorField,
    dual_generators,
    ks_matrix,
    lie_filtrations,
    residue_pairing,
)
from .stratification import (
    classify_point,
    lplus_invariants,
    mu_vector,
    rank_tau_at_point,
    strata_symbolic,
    tau_at_point,
)
from .symmetry import (
    GradedAutomorphism,
    enumerate_diagonal,
    group_closure,
    orbit_equivalent_contact,
    orbit_equivalent_right,
    theta,
)

__version__ = "0.1.0"
