"""Active-learning tandem-network inverse design toolkit.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from ._core import (
    Problem,
    TandemModel,
    __version__,
    active_learn,
    get_problem,
    make_test_set,
    measure_sbr,
    nmae,
    problem_names,
    r2,
    rmse,
    run_experiment,
    sample,
    sample_bounds,
    sbr_measurement_points,
    solve_sbr,
    validate_inverse,
)

__all__ = [
    "Problem",
    "TandemModel",
    "__version__",
    "active_learn",
    "get_problem",
    "make_test_set",
    "measure_sbr",
    "nmae",
    "problem_names",
    "r2",
    "rmse",
    "run_experiment",
    "sample",
    "sample_bounds",
    "sbr_measurement_points",
    "solve_sbr",
    "validate_inverse",
]
