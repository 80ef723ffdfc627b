"""Erlang's loss function: integer and continued evaluation, inequality
checks, dimensioning solvers and a loss-system simulator."""

from .continuation import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    erlang_b_real,
    log_inverse_blocking,
    phi_real,
    phi_real_complement,
    second_difference,
)
from .core import (
    erlang_b_int,
    erlang_b_sequence,
    log_binomial,
    log_phi,
    log_scaled_partial_sum,
    phi,
    scaled_partial_sum,
)
from .errors import ConvergenceError, DomainError
from .inverse import SolveOptions, min_servers, solve_servers_real, solve_traffic
from .properties import (
    CheckReport,
    SweepGrid,
    check_convexity,
    check_corollary,
    check_ineq_1_2,
    check_ineq_1_3,
    check_ineq_3_2,
    check_ineq_3_3,
    check_monotonicity,
    run_sweep,
)
from .simulator import SimConfig, SimResult, simulate

__version__ = "0.1.0"
