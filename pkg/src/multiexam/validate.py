"""Independent checker: evaluates every constraint directly on concrete
question sets.  Nothing here touches the solver package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import model as m
from .seating import SeatingChart, auto_chart, row_major

BASE = "base"


@dataclass(frozen=True)
class Violation:
    constraint: int | None  # position in task.constraints; None for the base model
    kind: str
    exams: tuple[int, ...]
    detail: str

    def __str__(self) -> str:
        where = BASE if self.constraint is None else f"constraint {self.constraint} ({self.kind})"
        exams = ", ".join(str(e) for e in self.exams)
        return f"{where}: exam(s) {exams}: {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def _kind(c) -> str:
    if isinstance(c, m.ForallQuestions):
        return "forallQuestions"
    if isinstance(c, m.CountScope):
        return "countScope"
    if isinstance(c, m.PercentScope):
        return "percentScope"
    if isinstance(c, m.Aggregate):
        return f"aggregate/{c.fn}"
    if isinstance(c, m.ExamCount):
        return "examCount"
    if isinstance(c, m.PairwiseOverlap):
        return "pairwiseOverlap"
    if isinstance(c, m.NeighborOverlap):
        return "neighborOverlap"
    if isinstance(c, m.StudentScoped):
        return f"studentScoped/{_kind(c.inner)}"
    return type(c).__name__


def _in_range(x, lo, hi) -> bool:
    return (lo is None or x >= lo) and (hi is None or x <= hi)


def _range_text(lo, hi) -> str:
    lo_s = "-inf" if lo is None else str(lo)
    hi_s = "inf" if hi is None else str(hi)
    return f"[{lo_s}, {hi_s}]"


def check_exam(pool: m.QuestionPool, c, questions: list[m.Question]) -> str | None:
    """Evaluate one intra-exam constraint on one exam; return a failure detail or None."""
    if isinstance(c, m.ForallQuestions):
        bad = [q.id for q in questions if not m.evaluate_predicate(c.predicate, q)]
        return f"questions {bad} fail the predicate" if bad else None
    if isinstance(c, m.CountScope):
        k = sum(1 for q in questions if m.evaluate_predicate(c.predicate, q))
        return None if _in_range(k, c.min, c.max) else f"{k} matching questions, required {_range_text(c.min, c.max)}"
    if isinstance(c, m.PercentScope):
        k = sum(1 for q in questions if m.evaluate_predicate(c.predicate, q))
        size = len(questions)
        lo_ok = c.min is None or k >= c.min * size
        hi_ok = c.max is None or k <= c.max * size
        if lo_ok and hi_ok:
            return None
        share = "n/a" if size == 0 else str(Fraction(k, size))
        return f"{k} of {size} questions match (fraction {share}), required {_range_text(c.min, c.max)}"
    if isinstance(c, m.Aggregate):
        values = [q.prop(c.property) for q in questions]
        if c.fn == "sum":
            total = sum(values)
            ok = _in_range(total, c.min, c.max)
            return None if ok else f"sum of {c.property} is {total}, required {_range_text(c.min, c.max)}"
        if c.fn == "average":
            total, size = sum(values), len(values)
            ok = (c.min is None or total >= c.min * size) and (c.max is None or total <= c.max * size)
            if ok:
                return None
            avg = "n/a" if size == 0 else str(Fraction(total, size))
            return f"average {c.property} is {avg}, required {_range_text(c.min, c.max)}"
        distinct = len(set(values))
        ok = _in_range(distinct, c.min, c.max)
        return None if ok else f"{distinct} distinct {c.property} values, required {_range_text(c.min, c.max)}"
    raise TypeError(f"not an intra-exam constraint: {c!r}")


def _chart(task: m.MultiExamTask) -> SeatingChart | None:
    if task.seating is None:
        return None
    if task.seating == m.AUTO:
        return auto_chart(task.exams)
    rows, seats = task.seating
    return row_major(rows, seats, task.exams)


def _adjacent_pairs(chart: SeatingChart, exams: list[int]) -> list[tuple[int, int]]:
    # Chebyshev distance 1 between seats, i.e. the 8 surrounding cells
    placed = [i for i in exams if 1 <= i <= chart.exams]
    out = []
    for i, j in combinations(placed, 2):
        (ri, si), (rj, sj) = chart.seat_of(i), chart.seat_of(j)
        if max(abs(ri - rj), abs(si - sj)) == 1:
            out.append((i, j))
    return out


def _base_violations(pool, task, solution, chart) -> list[Violation]:
    out = []
    indices = [e.index for e in solution.exams]
    if sorted(indices) != list(range(1, task.exams + 1)):
        out.append(Violation(None, BASE, tuple(indices), f"expected exams 1..{task.exams}"))
    for e in solution.exams:
        qs = list(e.questions)
        bad = [q for q in qs if not (isinstance(q, int) and 1 <= q <= pool.omega)]
        if bad:
            out.append(Violation(None, BASE, (e.index,), f"question ids {bad} outside 1..{pool.omega}"))
        dups = sorted({q for q in qs if qs.count(q) > 1})
        if dups:
            out.append(Violation(None, BASE, (e.index,), f"questions {dups} appear more than once"))
        size = len(set(qs))
        if not task.card_min <= size <= task.card_max:
            out.append(
                Violation(None, BASE, (e.index,), f"{size} questions, required [{task.card_min}, {task.card_max}]")
            )
        if chart is not None and 1 <= e.index <= chart.exams and e.seat is not None:
            if tuple(e.seat) != chart.seat_of(e.index):
                out.append(Violation(None, BASE, (e.index,), f"seat {e.seat} differs from chart seat {chart.seat_of(e.index)}"))
    return out


def validate(pool: m.QuestionPool, task: m.MultiExamTask, solution: m.Solution) -> ValidationReport:
    """Check ``solution`` against every constraint of ``task``; report all violations."""
    chart = _chart(task)
    report = ValidationReport(_base_violations(pool, task, solution, chart))

    by_index: dict[int, list[m.Question]] = {}
    sets: dict[int, set[int]] = {}
    for e in solution.exams:
        ids = [q for q in e.questions if isinstance(q, int) and 1 <= q <= pool.omega]
        uniq = sorted(set(ids))
        by_index[e.index] = [pool[q] for q in uniq]
        sets[e.index] = set(uniq)
    exams = sorted(by_index)

    for idx, c in enumerate(task.constraints):
        kind = _kind(c)
        if isinstance(c, m.INTRA_EXAM):
            for i in exams:
                detail = check_exam(pool, c, by_index[i])
                if detail:
                    report.violations.append(Violation(idx, kind, (i,), detail))
        elif isinstance(c, m.StudentScoped):
            if c.exam in by_index:
                detail = check_exam(pool, c.inner, by_index[c.exam])
                if detail:
                    report.violations.append(Violation(idx, kind, (c.exam,), detail))
        elif isinstance(c, m.ExamCount):
            hits = [i for i in exams if any(m.evaluate_predicate(c.predicate, q) for q in by_index[i])]
            if not _in_range(len(hits), c.min, c.max):
                report.violations.append(
                    Violation(idx, kind, tuple(hits), f"{len(hits)} exams contain a match, required {_range_text(c.min, c.max)}")
                )
        elif isinstance(c, (m.PairwiseOverlap, m.NeighborOverlap)):
            if isinstance(c, m.PairwiseOverlap):
                pairs = list(combinations(exams, 2))
            elif chart is None:
                report.violations.append(Violation(idx, kind, (), "no seating chart for neighbour constraint"))
                continue
            else:
                pairs = _adjacent_pairs(chart, exams)
            for i, j in pairs:
                shared = len(sets[i] & sets[j])
                if not _in_range(shared, c.min, c.max):
                    report.violations.append(
                        Violation(idx, kind, (i, j), f"share {shared} questions, required {_range_text(c.min, c.max)}")
                    )
        else:
            report.violations.append(Violation(idx, kind, (), "unknown constraint kind"))
    return report
