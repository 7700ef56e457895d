"""Lowest-rate directed metrics that force a geodesic from (0,0) to (0,1) through (1, a).

Closed-form answers live in ``closed_form``; ``relaxed`` and ``full`` solve
the discretized variational problem; ``metric.verify_geodesic`` checks the
shortcut condition for any sampled (F, rho).
"""

from .closed_form import (
    ClosedFormSolution,
    assemble_closed_form,
    b_opt_exact,
    breakpoint,
    closed_form_solution,
    density_exact,
    r3_coefficient,
    rate_exact,
    rho0_exact,
    shape_derivative_exact,
    shape_exact,
)
from .core import (
    DomainError,
    GridAlignmentError,
    InfeasibleInstanceError,
    InvalidOrderError,
    InvalidRangeError,
    InvalidSizeError,
    NonuniformGridError,
    PathProfile,
    RelaxedInstance,
    SolutionReport,
    TimeGrid,
    VerificationReport,
    cell_slopes,
    make_uniform_grid,
)
from .full import FullSolution, I1_of_b, check_against_closed_form, solve_full
from .kernels import BACKEND
from .metric import (
    GTrace,
    dirichlet,
    g_eval,
    margin_matrix,
    path_length,
    rate,
    shortcut_margin,
    verify_geodesic,
)
from .oracle import brute_solve
from .relaxed import SolverOptions, initial_guess, solve_relaxed
from .transforms import concavify, decreasing_rearrangement, improve

__version__ = "0.1.0"
