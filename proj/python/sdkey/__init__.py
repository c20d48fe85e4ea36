"""Secret-key bounds and protocol simulator for state-dependent multiple access channels."""

from ._sdkey import (
    BudgetExceeded,
    ValidationError,
    __version__,
    binary_entropy,
    conditional_mutual_information,
    entropy_bits,
    modadd_closed_form,
    run,
    run_csv,
    stuck_at_closed_form,
)

__all__ = [
    "BudgetExceeded",
    "ValidationError",
    "__version__",
    "binary_entropy",
    "conditional_mutual_information",
    "entropy_bits",
    "modadd_closed_form",
    "run",
    "run_csv",
    "stuck_at_closed_form",
]
