"""Well-control optimization toolkit.

Derivative-free optimizers (pattern search, particle swarm, covariance
adaptation), a two-phase five-spot reservoir simulator with NPV economics,
and a seeded experiment harness with CSV/JSON exports.  The heavy lifting
lives in the compiled `_core` extension; this package only re-exports it.
"""

from wellopt._core import (
    Case,
    builtin_case,
    load_case,
    optimize_case,
    optimize_case_multiscale,
    run_experiment_file,
    run_optimizer,
    __version__,
)

__all__ = [
    "Case",
    "builtin_case",
    "load_case",
    "optimize_case",
    "optimize_case_multiscale",
    "run_experiment_file",
    "run_optimizer",
    "__version__",
]
