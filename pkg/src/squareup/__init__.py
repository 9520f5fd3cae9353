"""Squaring-up for fat LTI plants, transmission zeros included.

Given a strictly proper plant {A, B, C} with more inputs than outputs,
this package synthesizes pseudo-output rows Ca such that the square
plant {A, B, [C; Ca]} is minimum phase. Plants that already carry
(stable) transmission zeros are handled: those zeros are provably fixed
points of any augmentation, and the pipeline detects them, matches them
against the plant's zero set, and places only the movable ones.
"""

__version__ = "0.1.0"

from .exceptions import (
    AssumptionError,
    GenerationError,
    NoStabilizingSolutionError,
    NumericalFailureError,
    RankDeficiencyError,
    SquareUpError,
    SystemFileError,
    UnstabilizableError,
)
from .fixtures import boeing_lateral
from .generators import GenSpec, plant_zero, random_system, zero_sweep_oracle
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    eig_with_left,
    matrix_rank,
    min_singular_value,
    null_basis,
    range_basis,
    right_inverse,
    solve_care,
)
from .statespace import (
    AssumptionCheck,
    AssumptionReport,
    StateSpace,
    ZeroSet,
    check_assumptions,
    input_decoupling_zeros,
    invariant_zeros,
    output_decoupling_zeros,
    rosenbrock,
    rosenbrock_pencil,
    transmission_zeros,
)
from .synthesis import (
    FixedModeReport,
    PseudoPair,
    SquareUpResult,
    TransformedSystem,
    assemble_augmentation,
    build_pseudo_pair,
    choose_c21,
    detect_fixed_modes,
    place_zeros_lqr,
    square_up,
    transform_to_controllable_coords,
    verify,
)

__all__ = [
    "__version__",
    "AssumptionCheck",
    "AssumptionError",
    "AssumptionReport",
    "DEFAULT_TOL",
    "FixedModeReport",
    "GenerationError",
    "GenSpec",
    "NoStabilizingSolutionError",
    "NumericalFailureError",
    "PseudoPair",
    "RankDeficiencyError",
    "SquareUpError",
    "SquareUpResult",
    "StateSpace",
    "SystemFileError",
    "Tolerances",
    "TransformedSystem",
    "UnstabilizableError",
    "ZeroSet",
    "assemble_augmentation",
    "boeing_lateral",
    "build_pseudo_pair",
    "check_assumptions",
    "choose_c21",
    "detect_fixed_modes",
    "eig_with_left",
    "input_decoupling_zeros",
    "invariant_zeros",
    "matrix_rank",
    "min_singular_value",
    "null_basis",
    "output_decoupling_zeros",
    "place_zeros_lqr",
    "plant_zero",
    "random_system",
    "range_basis",
    "right_inverse",
    "rosenbrock",
    "rosenbrock_pencil",
    "solve_care",
    "square_up",
    "transform_to_controllable_coords",
    "transmission_zeros",
    "verify",
    "zero_sweep_oracle",
]
