"""Numerical toolkit for ratio-based exponential transforms on [0, inf)^3,
Caputo fractional operational calculus, and the worked fractional heat and
telegraph examples, with every closed-form rule checked against
independent quadrature.
"""

from .errors import (
    ConfigError,
    ContourError,
    ConvergenceError,
    CostBudgetError,
    DivergenceError,
    DomainError,
    MissingBoundary,
    MissingDerivative,
    PoleError,
    QuadratureError,
    ShehuError,
    SingularDenominator,
    SolveError,
    StabilityError,
    UnknownSuite,
)
from .fd_oracle import FDGrid, classical_telegraph_solve, l1_heat_solve
from .forward import (
    ExpOrderFn,
    QuadratureConfig,
    RatioPoint,
    analytic_transform,
    shehu_1d,
    shehu_2d,
    shehu_3d,
)
from .fpde import (
    Grid3Field,
    GuardedSeriesResult,
    HeatSpec,
    TelegraphSpec,
    TransformSolution,
    binomial_series,
    heat_residual,
    heat_transform_solution,
    reconstruct,
    series_solution_heat,
    series_solution_telegraph,
    telegraph_residual,
    telegraph_transform_solution,
)
from .fracops import (
    AXES,
    FracOrder,
    SmoothFn,
    caputo_derivative,
    rl_derivative,
    rl_integral,
)
from .inverse import InversionConfig, invert_1d, invert_1d_complex, invert_3d
from .opcalc import (
    SUITE_IDS,
    BoundaryTransforms,
    VerificationReport,
    VerificationRow,
    boundary_from_quadrature,
    caputo_rule,
    convolve_3d,
    convolved_exp_order,
    integral_rule,
    verify_suite,
)
from .specfun import (
    MLParams,
    WrightSeriesResult,
    WrightSeriesSpec,
    gamma_fn,
    mittag_leffler,
    wright_series,
)

__version__ = "0.1.0"
