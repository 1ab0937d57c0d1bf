"""Exact witnesses that second-order derivations exceed compositions of
first-order ones on homogeneous isolated hypersurface singularities."""

from .derivations import (
    Adjustment,
    Derivation1,
    DerivationTuple,
    DiffOp2,
    build_candidate_tuple,
    compose2,
    euler_derivation,
    hamiltonian,
    lift_to_diff2,
    necessary_condition_test,
    replay_ledger,
    symmetrize,
    theta2_extract,
    verify_order2_identity,
)
from .exprio import (
    CertificateError,
    ParseError,
    format_poly,
    parse_poly,
    read_certificate,
    write_certificate,
)
from .groebner import (
    GroebnerBasis,
    Ideal,
    InternalInconsistencyError,
    ResourceLimitExceeded,
    buchberger,
    is_isolated_singularity,
    is_regular_sequence_homog,
    is_zero_dimensional,
    jacobian_ideal,
    lift_membership,
    normal_form,
    quotient_dimension,
)
from .minors import (
    MinorSpec,
    PolyMatrix,
    algebraic_cofactor,
    determinant,
    hessian,
    inversion_number,
    signed_minor,
    verify_cofactor_identity,
    verify_replaced_column_vanishes,
)
from .pipeline import (
    INPUT_REJECTED,
    RESOURCE_EXHAUSTED,
    WITNESS_FOUND,
    PipelineConfig,
    WitnessCertificate,
    build_witness,
    certificate_failures,
    generic_slice_search,
    saito_check,
    verify_certificate,
)
from .poly import GREVLEX, GRLEX, LEX, LinearChange, MonomialOrder, Polynomial

__version__ = "0.1.0"
