"""Exam-domain value types: questions, pools, predicates, constraints, tasks
and solutions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

PROPERTIES = ("topic", "level", "min-duration", "max-duration", "type", "points")

OPS = ("=", "!=", "<", "<=", ">", ">=")
_OP_ALIASES = {"==": "=", "≠": "!=", "≤": "<=", "≥": ">="}


class ModelError(ValueError):
    """A pool, task or constraint violates its structural invariants."""


@dataclass(frozen=True)
class Domains:
    """Upper ends of the six property domains (each domain is ``1..bound``)."""

    topics: int = 4
    levels: int = 4
    max_min_duration: int = 30
    max_max_duration: int = 60
    types: int = 3
    max_points: int = 6

    def __post_init__(self):
        for name, bound in self.bounds().items():
            if not isinstance(bound, int) or bound < 1:
                raise ModelError(f"domain bound for {name} must be a positive integer, got {bound!r}")

    def bounds(self) -> dict[str, int]:
        return {
            "topic": self.topics,
            "level": self.levels,
            "min-duration": self.max_min_duration,
            "max-duration": self.max_max_duration,
            "type": self.types,
            "points": self.max_points,
        }


@dataclass(frozen=True)
class Question:
    id: int
    topic: int
    level: int
    min_duration: int
    max_duration: int
    qtype: int
    points: int

    def prop(self, name: str) -> int:
        try:
            attr = _ATTR[name]
        except KeyError:
            raise ModelError(f"unknown question property {name!r}") from None
        return getattr(self, attr)


_ATTR = {
    "topic": "topic",
    "level": "level",
    "min-duration": "min_duration",
    "max-duration": "max_duration",
    "type": "qtype",
    "points": "points",
}


@dataclass(frozen=True)
class QuestionPool:
    domains: Domains
    questions: tuple[Question, ...]

    def __post_init__(self):
        object.__setattr__(self, "questions", tuple(self.questions))
        if not self.questions:
            raise ModelError("question pool is empty")
        bounds = self.domains.bounds()
        for pos, q in enumerate(self.questions, start=1):
            if q.id != pos:
                raise ModelError(f"question ids must be 1..{len(self.questions)} in order; found {q.id} at position {pos}")
            for name, bound in bounds.items():
                value = q.prop(name)
                if not isinstance(value, int) or not 1 <= value <= bound:
                    raise ModelError(f"question {q.id}: {name}={value!r} outside 1..{bound}")
            if q.min_duration > q.max_duration:
                raise ModelError(f"question {q.id}: min-duration {q.min_duration} exceeds max-duration {q.max_duration}")

    @property
    def omega(self) -> int:
        return len(self.questions)

    def __getitem__(self, qid: int) -> Question:
        if not 1 <= qid <= len(self.questions):
            raise KeyError(qid)
        return self.questions[qid - 1]

    def __iter__(self):
        return iter(self.questions)

    def __len__(self):
        return len(self.questions)


# -- predicates ---------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    property: str
    op: str
    value: int

    def __post_init__(self):
        if self.property not in PROPERTIES:
            raise ModelError(f"unknown question property {self.property!r}")
        op = _OP_ALIASES.get(self.op, self.op)
        if op not in OPS:
            raise ModelError(f"unknown comparison operator {self.op!r}")
        object.__setattr__(self, "op", op)


@dataclass(frozen=True)
class QuestionIs:
    question: int


@dataclass(frozen=True)
class And:
    items: tuple[Predicate, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class Or:
    items: tuple[Predicate, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class Not:
    item: Predicate


@dataclass(frozen=True)
class Implies:
    antecedent: Predicate
    consequent: Predicate


Predicate = Union[Atom, QuestionIs, And, Or, Not, Implies]


def _compare(a: int, op: str, b: int) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    return a >= b


def evaluate_predicate(pred: Predicate, q: Question) -> bool:
    if isinstance(pred, Atom):
        return _compare(q.prop(pred.property), pred.op, pred.value)
    if isinstance(pred, QuestionIs):
        return q.id == pred.question
    if isinstance(pred, And):
        return all(evaluate_predicate(p, q) for p in pred.items)
    if isinstance(pred, Or):
        return any(evaluate_predicate(p, q) for p in pred.items)
    if isinstance(pred, Not):
        return not evaluate_predicate(pred.item, q)
    if isinstance(pred, Implies):
        return not evaluate_predicate(pred.antecedent, q) or evaluate_predicate(pred.consequent, q)
    raise ModelError(f"not a predicate: {pred!r}")


# -- constraints --------------------------------------------------------------


def _bounds(lo, hi, *, what: str, need_one: bool = True, unit: bool = False):
    if need_one and lo is None and hi is None:
        raise ModelError(f"{what}: at least one of min/max is required")
    for b in (lo, hi):
        if b is None:
            continue
        if b < 0:
            raise ModelError(f"{what}: bound {b} is negative")
        if unit and b > 1:
            raise ModelError(f"{what}: percentage bound {b} exceeds 1")
    if lo is not None and hi is not None and lo > hi:
        raise ModelError(f"{what}: min {lo} exceeds max {hi}")


@dataclass(frozen=True)
class ForallQuestions:
    predicate: Predicate


@dataclass(frozen=True)
class CountScope:
    predicate: Predicate
    min: int | None = None
    max: int | None = None

    def __post_init__(self):
        _bounds(self.min, self.max, what="countScope")


@dataclass(frozen=True)
class PercentScope:
    predicate: Predicate
    min: Fraction | None = None
    max: Fraction | None = None

    def __post_init__(self):
        for name in ("min", "max"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, Fraction(value))
        _bounds(self.min, self.max, what="percentScope", unit=True)


AGGREGATE_FNS = ("sum", "average", "distinctCount")


@dataclass(frozen=True)
class Aggregate:
    fn: str
    property: str
    min: int | Fraction | None = None
    max: int | Fraction | None = None

    def __post_init__(self):
        if self.fn not in AGGREGATE_FNS:
            raise ModelError(f"unknown aggregate function {self.fn!r}")
        if self.property not in PROPERTIES:
            raise ModelError(f"unknown question property {self.property!r}")
        for name in ("min", "max"):
            value = getattr(self, name)
            if value is None:
                continue
            value = Fraction(value)
            if self.fn != "average":
                if value.denominator != 1:
                    raise ModelError(f"aggregate {self.fn}: bound {value} must be an integer")
                value = int(value)
            object.__setattr__(self, name, value)
        _bounds(self.min, self.max, what=f"aggregate {self.fn}")


@dataclass(frozen=True)
class ExamCount:
    predicate: Predicate
    min: int | None = None
    max: int | None = None

    def __post_init__(self):
        _bounds(self.min, self.max, what="examCount")


@dataclass(frozen=True)
class PairwiseOverlap:
    min: int | None = None
    max: int | None = None

    def __post_init__(self):
        _bounds(self.min, self.max, what="pairwiseOverlap")


@dataclass(frozen=True)
class NeighborOverlap:
    min: int | None = None
    max: int | None = None

    def __post_init__(self):
        _bounds(self.min, self.max, what="neighborOverlap")


INTRA_EXAM = (ForallQuestions, CountScope, PercentScope, Aggregate)


@dataclass(frozen=True)
class StudentScoped:
    exam: int
    inner: ForallQuestions | CountScope | PercentScope | Aggregate

    def __post_init__(self):
        if not isinstance(self.inner, INTRA_EXAM):
            raise ModelError(f"student constraints must be intra-exam, got {type(self.inner).__name__}")
        if self.exam < 1:
            raise ModelError(f"student constraint exam index {self.exam} must be >= 1")


ConstraintSpec = Union[
    ForallQuestions, CountScope, PercentScope, Aggregate, ExamCount, PairwiseOverlap, NeighborOverlap, StudentScoped
]


# -- task and solution --------------------------------------------------------

AUTO = "auto"


@dataclass(frozen=True)
class MultiExamTask:
    """``seating`` is None, ``"auto"`` or an explicit ``(rows, seats_per_row)``."""

    exams: int
    card_min: int
    card_max: int
    seating: tuple[int, int] | str | None = None
    constraints: tuple[ConstraintSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.exams < 1:
            raise ModelError(f"exam count must be >= 1, got {self.exams}")
        if not 0 <= self.card_min <= self.card_max:
            raise ModelError(f"bad cardinality interval [{self.card_min}, {self.card_max}]")
        if self.seating is not None and self.seating != AUTO:
            rows, seats = self.seating
            if rows < 1 or seats < 1:
                raise ModelError(f"seating {rows}x{seats} must have positive dimensions")
            if rows * seats < self.exams:
                raise ModelError(f"seating {rows}x{seats} has fewer seats than {self.exams} exams")
            object.__setattr__(self, "seating", (rows, seats))
        for c in self.constraints:
            if isinstance(c, StudentScoped) and c.exam > self.exams:
                raise ModelError(f"student constraint for exam {c.exam} but only {self.exams} exams")

    def check_pool(self, pool: QuestionPool) -> None:
        if self.card_max > pool.omega:
            raise ModelError(f"cardinality max {self.card_max} exceeds pool size {pool.omega}")


@dataclass(frozen=True)
class ExamAssignment:
    index: int
    questions: tuple[int, ...]
    seat: tuple[int, int] | None = None


@dataclass
class SolutionStats:
    wall_millis: float | None = None
    nodes: int = 0
    backtracks: int = 0
    propagations: int = 0


@dataclass
class Solution:
    exams: list[ExamAssignment]
    stats: SolutionStats = field(default_factory=SolutionStats)

    def question_sets(self) -> list[frozenset[int]]:
        return [frozenset(e.questions) for e in self.exams]
