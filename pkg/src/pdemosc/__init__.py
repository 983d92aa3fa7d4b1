"""Algebraic and numerical spectra of position-dependent-mass oscillators."""

from .discrete import (
    EigenSolution,
    Grid,
    TridiagonalOperator,
    assemble_sturm_liouville,
    assemble_von_roos,
    build_grid,
    eigen_tridiagonal,
    inner_product,
    uniform_grid,
)
from .errors import (
    ConstraintViolatedError,
    ConvergenceFailureError,
    DegreeMismatchError,
    InvalidCountError,
    InvalidLambdaError,
    LengthMismatchError,
    NonPositiveAlphaError,
    NotABoundStateError,
    NotProportionalError,
    OutOfDomainError,
    PdemError,
)
from .families import (
    Kind,
    MassProfile,
    ShapeInvariantFamily,
    SpectrumTable,
    VonRoosOrdering,
    alpha_at,
    bound_state_count,
    energy,
    energy_via_recursion,
    ground_state_unnormalized,
    make_family,
    mass_at,
    potential_full,
    potential_minus,
    potential_plus,
    remainder,
    spectrum_table,
    superpotential_at,
    unified_deformation,
)
from .polynomials import (
    FamilyTag,
    LambdaPoly,
    Parameterization,
    Ratio,
    derivative_relation_residual,
    eigenfunction_samples,
    evaluate,
    gf_polynomial,
    harmonic_limit,
    proportionality_ratio,
    rodrigues_polynomial,
    three_term_next,
    to_json_dict,
)
from .susy import (
    Banded,
    LadderMatrices,
    ResidualEntry,
    ResidualReport,
    build_ladder,
    report_to_json_dict,
    state_map_cosine,
    verify_all,
    verify_annihilation,
    verify_factorization,
    verify_intertwining,
    verify_shift_identity,
    verify_superalgebra,
)
from .cli import run

__version__ = "0.1.0"
