"""Regular simplex gradients in O(n), with O(h^2) Richardson extrapolation."""

from .errors import (
    DegenerateSimplexError,
    DimensionError,
    EvaluationError,
    ExtrapolationError,
    InfeasibleConstructionError,
    InputError,
    NumericalError,
    RegSimplexError,
    RegularityError,
    SingularSystemError,
)
from .extrapolation import Extrapolation, ExtrapolationPlan, extrapolate, extrapolated_gradient, richardson
from .gradient import (
    ErrorBoundInput,
    GradientEstimate,
    Order,
    SampleSet,
    aligned_gradient,
    error_bound_centroid,
    error_bound_vertex,
    general_gradient,
    ls_oracle_gradient,
    oracle_gradient,
    sample_aligned,
    simplex_gradient,
    square_system_gradient,
)
from .simplex import (
    AlignedRegularSimplex,
    GeneralRegularSimplex,
    IntegerSimplex,
    Orientation,
    RegularityReport,
    SimplexConstants,
    arm,
    arm_from_edge,
    basis_matrix,
    constants,
    edge_length,
    integer_simplex,
    schoenberg_case,
    schoenberg_feasible,
    validate_regular,
    vertex,
)

__version__ = "0.1.0"
