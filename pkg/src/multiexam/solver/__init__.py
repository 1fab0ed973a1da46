"""Generic set-variable propagation solver (knows nothing about exams)."""

from .propagators import (
    AverageOfProperty,
    Cardinality,
    CountByPredicate,
    DistinctCount,
    ExamCount,
    IntersectionCard,
    PercentByPredicate,
    Propagator,
    SumOfProperty,
)
from .search import SearchConfig, SearchLimit, SearchStats, SolveResult, Status, iter_solutions, solve, solve_all
from .store import Contradiction, InvalidModel, SetVar, Store, iter_bits, to_mask, to_set

__all__ = [
    "AverageOfProperty",
    "Cardinality",
    "Contradiction",
    "CountByPredicate",
    "DistinctCount",
    "ExamCount",
    "IntersectionCard",
    "InvalidModel",
    "PercentByPredicate",
    "Propagator",
    "SearchConfig",
    "SearchLimit",
    "SearchStats",
    "SetVar",
    "SolveResult",
    "Status",
    "Store",
    "SumOfProperty",
    "iter_bits",
    "iter_solutions",
    "solve",
    "solve_all",
    "to_mask",
    "to_set",
]
