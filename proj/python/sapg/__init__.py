"""Feasible smoothing methods for robust truss optimization.

Thin wrapper around the compiled extension. The heavy lifting (spectral
smoothing, breakpoint projection, the solvers) lives in C++; this package
re-exports the bound names and adds nothing on top.
"""

from ._core import (
    BoxBudgetSet,
    InstanceConfig,
    Problem,
    Trace,
    build_instance,
    check_suite,
    log_sum_exp,
    project_box_budget,
    rate_bound,
    softmax_weights,
    solve,
    suites,
    sym_eig,
)

__all__ = [
    "BoxBudgetSet",
    "InstanceConfig",
    "Problem",
    "Trace",
    "build_instance",
    "check_suite",
    "log_sum_exp",
    "project_box_budget",
    "rate_bound",
    "softmax_weights",
    "solve",
    "suites",
    "sym_eig",
]
