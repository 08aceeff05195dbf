"""compatamg: compatible restriction/interpolation pairs for nonsymmetric AMG.

Dense, desk-scale tooling to construct transfer-operator pairs whose
coarse-grid correction is orthogonal in a chosen SPD norm, and to measure
how far any given pair is from that ideal.
"""

from .linalg import (
    CFPartition,
    NormSpec,
    PartitionedMatrix,
    SingularMatrixError,
    m_adjoint,
    operator_m_norm,
    partition,
    realize_norm,
    schur_c,
    schur_f,
    spd_check,
    spd_sqrt,
)
from .matio import (
    load_matrix,
    load_matrix_json,
    load_matrix_market,
    save_matrix_json,
    save_matrix_market,
)
from .problems import ProblemSpec, default_splitting, generate
from .projection import (
    OrthogonalityChecks,
    ProjectionReport,
    build_pi,
    min_canonical_angle,
    nonorth_measure,
    orthogonality_checks,
    pi_m_norm,
    projection_report,
    verify_compat_equation,
)
from .solver import (
    RelaxSpec,
    TwoGridSpec,
    air_cpoint_residual,
    conv_factor,
    iterate,
    observed_rate,
    relax_propagator,
    two_grid_propagator,
)
from .transfer import (
    SINGLE_OPERATOR_PAIRS,
    CatalogEntry,
    QChoice,
    TransferPair,
    catalog_pairs,
    change_of_basis_pair,
    compatible_w_from_z,
    compatible_w_from_z_general,
    compatible_z_from_w,
    ideal_pair,
    ideal_w,
    ideal_z,
    make_pair,
    p_ideal,
    r_ideal,
    realize_q,
    single_operator_pair,
)

__version__ = "0.1.0"

__all__ = [
    "CFPartition",
    "PartitionedMatrix",
    "NormSpec",
    "QChoice",
    "TransferPair",
    "CatalogEntry",
    "ProblemSpec",
    "ProjectionReport",
    "OrthogonalityChecks",
    "RelaxSpec",
    "TwoGridSpec",
    "SingularMatrixError",
    "SINGLE_OPERATOR_PAIRS",
    "partition",
    "schur_c",
    "schur_f",
    "realize_norm",
    "spd_check",
    "spd_sqrt",
    "m_adjoint",
    "operator_m_norm",
    "ideal_w",
    "ideal_z",
    "p_ideal",
    "r_ideal",
    "make_pair",
    "compatible_w_from_z",
    "compatible_z_from_w",
    "compatible_w_from_z_general",
    "ideal_pair",
    "catalog_pairs",
    "change_of_basis_pair",
    "single_operator_pair",
    "realize_q",
    "build_pi",
    "pi_m_norm",
    "nonorth_measure",
    "min_canonical_angle",
    "orthogonality_checks",
    "verify_compat_equation",
    "projection_report",
    "generate",
    "default_splitting",
    "relax_propagator",
    "two_grid_propagator",
    "conv_factor",
    "air_cpoint_residual",
    "iterate",
    "observed_rate",
    "save_matrix_json",
    "load_matrix_json",
    "save_matrix_market",
    "load_matrix_market",
    "load_matrix",
]
