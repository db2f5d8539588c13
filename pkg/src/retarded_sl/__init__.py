"""Numerical spectral analysis of a Sturm-Liouville problem with a retarded
argument, eigenparameter-dependent boundary conditions and an interior
interface at pi/2."""

from .asymptotics import AsymptoticRow, asymptotic_report, predicted_mu
from .charfn import char_fn, char_fn_many, char_fn_picard, char_fn_unperturbed, char_fn_zero_q
from .config import Numerics, ProblemConfig, load_config, parse_config
from .dde import GridSpec, Trajectory, picard_solve, solve_omega
from .errors import (
    ConfigError,
    EvalDomainError,
    ExprSyntaxError,
    IndexingError,
    MissingLabel,
    MuZero,
    NoConvergence,
    NonFiniteState,
    UnknownIdentifier,
    ValidationError,
)
from .expr import eval_expr, parse_expr, unparse
from .pqrs import PQRSValues, compute_pqrs
from .problem import PiecewiseFn, Problem, build_problem, make_problem, sample_problem
from .spectrum import IndexedSpectrum, Label, compute_spectrum, index_spectrum, scan_roots, unperturbed_zero
from .trace import TraceReport, trace_partial_sum, trace_report, trace_rhs, trace_term

__version__ = "0.1.0"
