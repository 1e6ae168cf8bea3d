"""Coherent states of generalized-hypergeometric type with matrix labels."""
from .algebra import (
    LadderOperators,
    StructureTable,
    build_ladders,
    build_structure,
    displace_vacuum,
    structure_closed_form,
)
from .errors import (
    ConvergenceError,
    DivergenceError,
    HyperCSError,
    TruncationError,
    TruncationWarning,
)
from .matrixstates import (
    U0,
    U1,
    DiagonalLabel,
    MatrixCoherentState,
    Projector,
    cauchy_apply,
    make_matrix_state,
    matrix_gram,
)
from .specfun import MeasureWeight, ModelParams, gamma, pfq, weight_catalog, weighted_moment
from .states import CoherentState, DiagonalObservable, expect_direct, expect_euler, make_state
from .thermal import (
    LinearSpectrum,
    ThermalModel,
    entropy_closed,
    entropy_series,
    husimi_q,
    p_function_linear,
    thermal_model,
    verify_identity_resolution,
    verify_p_moments,
)

__version__ = "0.1.0"
