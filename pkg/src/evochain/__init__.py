"""Chains of evolution algebras: construction, validation, and analyzers."""

from .algebra import EvolutionAlgebra, matrix_distance, read_matrix, write_matrix
from .baric import TrivialClass, WeightFunction, classify_trivial, is_baric, weight_functions
from .chains import (
    ChainFamily,
    CKReport,
    LimitClass,
    LIMIT_MATRICES,
    TimeFunction,
    build_family,
    chain_det,
    check_homogeneous,
    check_period,
    constant_row,
    example1,
    example2,
    from_callable,
    limit_classify_example2,
    numeric_limit,
    rotation,
    snapshot,
    theorem5,
    triangular,
    two_state,
    verify_ck,
)
from .errors import EvaluationDomainError, InputError
from .idempotent import (
    Exactness,
    IdempotentSet,
    idempotent_critical_time,
    idempotent_oracle,
    idempotents_example2,
)
from .nilpotent import NilpotentKind, NilpotentSet, nilpotent_analysis, nilpotent_oracle
from .rotation2d import BasisChange2, RotAlgebra, change_basis_2d, density_search, iso_rotation
from .transitions import (
    Controller,
    CriticalTimes,
    Diagram,
    DiagramProperty,
    analytic_baric_set,
    baric_fraction,
    baric_times,
    classify_point,
    const_controller,
    controller_from,
    critical_times_p1,
    diagram,
    explinear_controller,
    sin_controller,
    tan_controller,
    write_diagram_csv,
)

__version__ = "0.1.0"
