"""JSON reading and writing for pool, task and solution files.

Parsing is strict: unknown keys and wrong types raise ``FormatError`` with the
offending field path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import model as m


class FormatError(ValueError):
    pass


def _expect_keys(obj, where: str, required: set[str], optional: set[str] = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - required - optional
    if unknown:
        raise FormatError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise FormatError(f"{where}: missing field(s) {sorted(missing)}")


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: expected an integer, got {value!r}")
    return value


def _opt_int(value, where: str) -> int | None:
    return None if value is None else _int(value, where)


def _rational(value, where: str) -> Fraction | None:
    if value is None:
        return None
    if isinstance(value, bool):
        raise FormatError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        # decimal literal, not the binary float
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            pass
    raise FormatError(f"{where}: expected a number or 'a/b' string, got {value!r}")


def _rational_out(value: Fraction | int | None):
    if value is None:
        return None
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def _loads(text: str, source: str) -> Any:
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _read(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not valid UTF-8 ({exc.reason})") from None
    return _loads(text, str(path))


def _write(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# -- pool ---------------------------------------------------------------------

_DOMAIN_KEYS = {
    "topics": "topics",
    "levels": "levels",
    "maxMinDuration": "max_min_duration",
    "maxMaxDuration": "max_max_duration",
    "types": "types",
    "maxPoints": "max_points",
}
_QUESTION_KEYS = {
    "topic": "topic",
    "level": "level",
    "min-duration": "min_duration",
    "max-duration": "max_duration",
    "type": "qtype",
    "points": "points",
}


def pool_from_obj(obj) -> m.QuestionPool:
    _expect_keys(obj, "pool", {"domains", "questions"})
    dom = obj["domains"]
    _expect_keys(dom, "pool.domains", set(_DOMAIN_KEYS))
    domains_kw = {attr: _int(dom[key], f"pool.domains.{key}") for key, attr in _DOMAIN_KEYS.items()}
    if not isinstance(obj["questions"], list):
        raise FormatError("pool.questions: expected a list")
    questions = []
    for i, q in enumerate(obj["questions"]):
        where = f"pool.questions[{i}]"
        _expect_keys(q, where, {"id", *_QUESTION_KEYS})
        kw = {attr: _int(q[key], f"{where}.{key}") for key, attr in _QUESTION_KEYS.items()}
        questions.append(m.Question(id=_int(q["id"], f"{where}.id"), **kw))
    try:
        return m.QuestionPool(m.Domains(**domains_kw), tuple(questions))
    except m.ModelError as exc:
        raise FormatError(f"pool: {exc}") from None


def pool_to_obj(pool: m.QuestionPool) -> dict:
    d = pool.domains
    return {
        "domains": {key: getattr(d, attr) for key, attr in _DOMAIN_KEYS.items()},
        "questions": [
            {"id": q.id, **{key: getattr(q, attr) for key, attr in _QUESTION_KEYS.items()}} for q in pool
        ],
    }


def load_pool(path) -> m.QuestionPool:
    return pool_from_obj(_read(path))


def save_pool(pool: m.QuestionPool, path) -> None:
    _write(path, pool_to_obj(pool))


# -- predicates and constraints -----------------------------------------------


def predicate_from_obj(obj, where: str = "predicate") -> m.Predicate:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    try:
        if "op" in obj:
            _expect_keys(obj, where, {"property", "op", "value"})
            return m.Atom(obj["property"], obj["op"], _int(obj["value"], f"{where}.value"))
        if len(obj) != 1:
            raise FormatError(f"{where}: expected exactly one of questionIs/and/or/not/implies or an atom")
        (key, val), = obj.items()
        if key == "questionIs":
            return m.QuestionIs(_int(val, f"{where}.questionIs"))
        if key in ("and", "or"):
            if not isinstance(val, list) or not val:
                raise FormatError(f"{where}.{key}: expected a non-empty list")
            items = tuple(predicate_from_obj(p, f"{where}.{key}[{i}]") for i, p in enumerate(val))
            return m.And(items) if key == "and" else m.Or(items)
        if key == "not":
            return m.Not(predicate_from_obj(val, f"{where}.not"))
        if key == "implies":
            if not isinstance(val, list) or len(val) != 2:
                raise FormatError(f"{where}.implies: expected a two-element list")
            return m.Implies(
                predicate_from_obj(val[0], f"{where}.implies[0]"), predicate_from_obj(val[1], f"{where}.implies[1]")
            )
    except m.ModelError as exc:
        raise FormatError(f"{where}: {exc}") from None
    raise FormatError(f"{where}: unknown predicate key {key!r}")


def predicate_to_obj(pred: m.Predicate) -> dict:
    if isinstance(pred, m.Atom):
        return {"property": pred.property, "op": pred.op, "value": pred.value}
    if isinstance(pred, m.QuestionIs):
        return {"questionIs": pred.question}
    if isinstance(pred, m.And):
        return {"and": [predicate_to_obj(p) for p in pred.items]}
    if isinstance(pred, m.Or):
        return {"or": [predicate_to_obj(p) for p in pred.items]}
    if isinstance(pred, m.Not):
        return {"not": predicate_to_obj(pred.item)}
    if isinstance(pred, m.Implies):
        return {"implies": [predicate_to_obj(pred.antecedent), predicate_to_obj(pred.consequent)]}
    raise TypeError(f"not a predicate: {pred!r}")


_BOUNDS = {"min", "max"}


def constraint_from_obj(obj, where: str = "constraint"):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise FormatError(f"{where}: expected an object with a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "forallQuestions":
            _expect_keys(obj, where, {"kind", "predicate"})
            return m.ForallQuestions(predicate_from_obj(obj["predicate"], f"{where}.predicate"))
        if kind in ("countScope", "examCount"):
            _expect_keys(obj, where, {"kind", "predicate"}, _BOUNDS)
            cls = m.CountScope if kind == "countScope" else m.ExamCount
            return cls(
                predicate_from_obj(obj["predicate"], f"{where}.predicate"),
                _opt_int(obj.get("min"), f"{where}.min"),
                _opt_int(obj.get("max"), f"{where}.max"),
            )
        if kind == "percentScope":
            _expect_keys(obj, where, {"kind", "predicate"}, _BOUNDS)
            return m.PercentScope(
                predicate_from_obj(obj["predicate"], f"{where}.predicate"),
                _rational(obj.get("min"), f"{where}.min"),
                _rational(obj.get("max"), f"{where}.max"),
            )
        if kind == "aggregate":
            _expect_keys(obj, where, {"kind", "fn", "property"}, _BOUNDS)
            return m.Aggregate(
                obj["fn"], obj["property"], _rational(obj.get("min"), f"{where}.min"), _rational(obj.get("max"), f"{where}.max")
            )
        if kind in ("pairwiseOverlap", "neighborOverlap"):
            _expect_keys(obj, where, {"kind"}, _BOUNDS)
            cls = m.PairwiseOverlap if kind == "pairwiseOverlap" else m.NeighborOverlap
            return cls(_opt_int(obj.get("min"), f"{where}.min"), _opt_int(obj.get("max"), f"{where}.max"))
    except m.ModelError as exc:
        raise FormatError(f"{where}: {exc}") from None
    raise FormatError(f"{where}: unknown constraint kind {kind!r}")


def constraint_to_obj(c) -> dict:
    def bounds(lo, hi, rational=False):
        out = {}
        conv = _rational_out if rational else (lambda x: x)
        if lo is not None:
            out["min"] = conv(lo)
        if hi is not None:
            out["max"] = conv(hi)
        return out

    if isinstance(c, m.ForallQuestions):
        return {"kind": "forallQuestions", "predicate": predicate_to_obj(c.predicate)}
    if isinstance(c, m.CountScope):
        return {"kind": "countScope", "predicate": predicate_to_obj(c.predicate), **bounds(c.min, c.max)}
    if isinstance(c, m.ExamCount):
        return {"kind": "examCount", "predicate": predicate_to_obj(c.predicate), **bounds(c.min, c.max)}
    if isinstance(c, m.PercentScope):
        return {"kind": "percentScope", "predicate": predicate_to_obj(c.predicate), **bounds(c.min, c.max, True)}
    if isinstance(c, m.Aggregate):
        return {"kind": "aggregate", "fn": c.fn, "property": c.property, **bounds(c.min, c.max, True)}
    if isinstance(c, m.PairwiseOverlap):
        return {"kind": "pairwiseOverlap", **bounds(c.min, c.max)}
    if isinstance(c, m.NeighborOverlap):
        return {"kind": "neighborOverlap", **bounds(c.min, c.max)}
    raise TypeError(f"cannot serialise {c!r}")


# -- task ---------------------------------------------------------------------


def task_from_obj(obj) -> m.MultiExamTask:
    _expect_keys(obj, "task", {"exams", "cardinality", "constraints"}, {"seating", "studentConstraints"})
    n = _int(obj["exams"], "task.exams")
    card = obj["cardinality"]
    _expect_keys(card, "task.cardinality", {"min", "max"})
    seating = obj.get("seating")
    if seating is not None and seating != m.AUTO:
        _expect_keys(seating, "task.seating", {"rows", "seatsPerRow"})
        seating = (_int(seating["rows"], "task.seating.rows"), _int(seating["seatsPerRow"], "task.seating.seatsPerRow"))
    if not isinstance(obj["constraints"], list):
        raise FormatError("task.constraints: expected a list")
    constraints = [constraint_from_obj(c, f"task.constraints[{i}]") for i, c in enumerate(obj["constraints"])]
    students = obj.get("studentConstraints") or []
    if not isinstance(students, list):
        raise FormatError("task.studentConstraints: expected a list")
    for i, sc in enumerate(students):
        where = f"task.studentConstraints[{i}]"
        _expect_keys(sc, where, {"exam", "constraint"})
        inner = constraint_from_obj(sc["constraint"], f"{where}.constraint")
        try:
            constraints.append(m.StudentScoped(_int(sc["exam"], f"{where}.exam"), inner))
        except m.ModelError as exc:
            raise FormatError(f"{where}: {exc}") from None
    try:
        return m.MultiExamTask(
            n,
            _int(card["min"], "task.cardinality.min"),
            _int(card["max"], "task.cardinality.max"),
            seating,
            tuple(constraints),
        )
    except (m.ModelError, TypeError, ValueError) as exc:
        raise FormatError(f"task: {exc}") from None


def task_to_obj(task: m.MultiExamTask) -> dict:
    if task.seating is None or task.seating == m.AUTO:
        seating = task.seating
    else:
        seating = {"rows": task.seating[0], "seatsPerRow": task.seating[1]}
    instructor = [c for c in task.constraints if not isinstance(c, m.StudentScoped)]
    students = [c for c in task.constraints if isinstance(c, m.StudentScoped)]
    if any(isinstance(c, m.StudentScoped) for c in task.constraints[: len(instructor)]):
        raise ValueError("student constraints must follow instructor constraints to serialise")
    obj = {
        "exams": task.exams,
        "cardinality": {"min": task.card_min, "max": task.card_max},
        "seating": seating,
        "constraints": [constraint_to_obj(c) for c in instructor],
    }
    if students:
        obj["studentConstraints"] = [{"exam": c.exam, "constraint": constraint_to_obj(c.inner)} for c in students]
    return obj


def load_task(path) -> m.MultiExamTask:
    return task_from_obj(_read(path))


def save_task(task: m.MultiExamTask, path) -> None:
    _write(path, task_to_obj(task))


# -- solution -----------------------------------------------------------------


def solution_from_obj(obj) -> m.Solution:
    _expect_keys(obj, "solution", {"exams"}, {"stats"})
    if not isinstance(obj["exams"], list):
        raise FormatError("solution.exams: expected a list")
    exams = []
    for i, e in enumerate(obj["exams"]):
        where = f"solution.exams[{i}]"
        _expect_keys(e, where, {"index", "questions"}, {"seat"})
        seat = e.get("seat")
        if seat is not None:
            _expect_keys(seat, f"{where}.seat", {"row", "seat"})
            seat = (_int(seat["row"], f"{where}.seat.row"), _int(seat["seat"], f"{where}.seat.seat"))
        if not isinstance(e["questions"], list):
            raise FormatError(f"{where}.questions: expected a list")
        qs = tuple(_int(q, f"{where}.questions[{k}]") for k, q in enumerate(e["questions"]))
        exams.append(m.ExamAssignment(_int(e["index"], f"{where}.index"), qs, seat))
    stats = m.SolutionStats()
    if obj.get("stats") is not None:
        st = obj["stats"]
        _expect_keys(st, "solution.stats", set(), {"wallMillis", "nodes", "backtracks"})
        wall = st.get("wallMillis")
        stats = m.SolutionStats(
            wall_millis=None if wall is None else float(_rational(wall, "solution.stats.wallMillis")),
            nodes=_int(st.get("nodes", 0), "solution.stats.nodes"),
            backtracks=_int(st.get("backtracks", 0), "solution.stats.backtracks"),
        )
    return m.Solution(exams, stats)


def solution_to_obj(solution: m.Solution, *, timing: bool = True) -> dict:
    wall = solution.stats.wall_millis if timing else None
    return {
        "exams": [
            {
                "index": e.index,
                "seat": None if e.seat is None else {"row": e.seat[0], "seat": e.seat[1]},
                "questions": sorted(e.questions),
            }
            for e in solution.exams
        ],
        "stats": {
            "wallMillis": None if wall is None else round(wall, 3),
            "nodes": solution.stats.nodes,
            "backtracks": solution.stats.backtracks,
        },
    }


def load_solution(path) -> m.Solution:
    return solution_from_obj(_read(path))


def save_solution(solution: m.Solution, path, *, timing: bool = True) -> None:
    _write(path, solution_to_obj(solution, timing=timing))
