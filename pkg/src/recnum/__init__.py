"""Linear recurrence number systems: digit expansions, exponential sums,
certified supremum bounds, and sieve experiments."""

from .base import (
    BaseContext,
    CostGuardError,
    IntegerWidthError,
    PreconditionError,
    RecurrenceSpec,
    dominant_root,
    make_context,
    strengthened_initials,
    validate_spec,
)
from .digits import Expansion, expand, is_parry_admissible, sum_of_digits, value_of

__all__ = [
    "BaseContext",
    "CostGuardError",
    "Expansion",
    "IntegerWidthError",
    "PreconditionError",
    "RecurrenceSpec",
    "dominant_root",
    "expand",
    "is_parry_admissible",
    "make_context",
    "strengthened_initials",
    "sum_of_digits",
    "validate_spec",
    "value_of",
]

__version__ = "0.1.0"
