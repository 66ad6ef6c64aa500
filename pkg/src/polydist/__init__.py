"""Bounds on the distance from a matrix polynomial to polynomials with prescribed eigenvalues."""
from .bounds import BoundsReport, beta_low, beta_up, minimize_scalar, optimize_bounds, sweep
from .errors import (
    InfeasibleConstruction,
    NumericalFailure,
    PolydistError,
    PreconditionError,
    ProblemFormatError,
)
from .fgamma import GammaAssembly, assemble_F, assemble_F_varpi, null_family, rho_triple
from .matpoly import (
    MatrixPolynomial,
    TargetSet,
    WeightSet,
    divided_difference,
    evaluate,
    spectrum,
    varpi_pair,
    varpi_recursive,
    varpi_single,
    weight_poly,
)
from .perturb import beta_scalars, build_delta, build_delta_standard, build_q0, hat_transform

__version__ = "0.1.0"
