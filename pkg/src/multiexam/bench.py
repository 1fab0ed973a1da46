"""Timing harness over a (questions x exams) grid of synthesized tasks."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import synth
from .compiler import compile_task, exam_config
from .solver import Status, solve

TABLE_QUESTIONS = (25, 50, 75, 100, 150, 250, 500, 750, 1000)
TABLE_EXAMS = (1, 5, 10, 25, 50, 75, 100, 250, 500, 750, 1000)
DEFAULT_TIMEOUT = 300.0
FORMATS = ("csv", "markdown", "runs")


@dataclass
class Cell:
    questions: int
    exams: int
    outcome: str  # sat | unsat | timeout
    run_millis: list[float] = field(default_factory=list)

    @property
    def runs(self) -> int:
        return len(self.run_millis)

    @property
    def mean_millis(self) -> float:
        return sum(self.run_millis) / len(self.run_millis)


@dataclass
class Grid:
    questions: tuple[int, ...]
    exams: tuple[int, ...]
    timeout: float | None
    cells: dict[tuple[int, int], Cell]

    def __iter__(self):
        for q in self.questions:
            for n in self.exams:
                yield self.cells[(q, n)]


def run_cell(
    questions: int,
    exams: int,
    runs: int = 3,
    timeout: float | None = DEFAULT_TIMEOUT,
    seed: int = synth.DEFAULT_SEED,
    m: int = 10,
    make_task=None,
) -> Cell:
    """Solve one grid cell ``runs`` times, each on a freshly compiled store.

    The task is ``standard_task(exams, m)`` unless ``make_task(exams)`` is given.
    Pool synthesis is outside the timed region; compilation and search are inside.
    Search is deterministic, so a run that hits the timeout ends the cell.
    """
    pool = synth.synth_pool(questions, seed)
    task = make_task(exams) if make_task else synth.standard_task(exams, m)
    config = exam_config(seed=seed, timeout=timeout)
    cell = Cell(questions, exams, "sat")
    for _ in range(runs):
        t0 = time.perf_counter()
        compiled = compile_task(pool, task)
        result = solve(compiled.store, config)
        cell.run_millis.append((time.perf_counter() - t0) * 1000.0)
        cell.outcome = result.status.value
        if result.status is Status.TIMEOUT:
            break
    return cell


def _cell_args(args):
    return run_cell(*args)


def run_grid(
    question_sizes=TABLE_QUESTIONS,
    exam_sizes=TABLE_EXAMS,
    runs: int = 3,
    timeout: float | None = DEFAULT_TIMEOUT,
    seed: int = synth.DEFAULT_SEED,
    m: int = 10,
    parallel: int = 0,
    progress=None,
    make_task=None,
) -> Grid:
    """Run every (questions, exams) cell in row-major order.

    ``parallel`` > 1 runs cells in worker processes; timings then interfere with
    each other, so use it for outcomes only.  ``progress`` is called with each
    finished cell.  ``make_task`` must be picklable when running in parallel.
    """
    question_sizes, exam_sizes = tuple(question_sizes), tuple(exam_sizes)
    if not question_sizes or not exam_sizes:
        raise ValueError("question and exam size lists must be non-empty")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    jobs = [(q, n, runs, timeout, seed, m, make_task) for q in question_sizes for n in exam_sizes]
    cells = {}
    if parallel > 1:
        with ProcessPoolExecutor(parallel) as ex:
            results = ex.map(_cell_args, jobs)
            for cell in results:
                cells[(cell.questions, cell.exams)] = cell
                if progress:
                    progress(cell)
    else:
        for job in jobs:
            cell = run_cell(*job)
            cells[(cell.questions, cell.exams)] = cell
            if progress:
                progress(cell)
    return Grid(question_sizes, exam_sizes, timeout, cells)


def humanize(millis: float) -> str:
    """Milliseconds below 5 s, then seconds, then minutes, two decimals each."""
    if millis < 5000:
        return f"{millis:.2f}"
    if millis < 60000:
        return f"{millis / 1000:.2f}s"
    return f"{millis / 60000:.2f}m"


def _markdown_cell(cell: Cell, timeout: float | None) -> str:
    if cell.outcome == "timeout":
        return f">{timeout:g}s" if timeout is not None else ">"
    if cell.outcome == "unsat":
        return f"unsat ({humanize(cell.mean_millis)})"
    return humanize(cell.mean_millis)


def render(grid: Grid, fmt: str = "markdown") -> str:
    """``csv``: one summary row per cell; ``runs``: one row per run; ``markdown``: a table."""
    if fmt == "markdown":
        head = "| Questions \\ Exams | " + " | ".join(str(n) for n in grid.exams) + " |"
        rule = "|---|" + "---:|" * len(grid.exams)
        rows = [
            f"| {q} | " + " | ".join(_markdown_cell(grid.cells[(q, n)], grid.timeout) for n in grid.exams) + " |"
            for q in grid.questions
        ]
        return "\n".join([head, rule, *rows]) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if fmt == "csv":
        w.writerow(["questions", "exams", "meanMillis", "outcome"])
        for c in grid:
            w.writerow([c.questions, c.exams, repr(c.mean_millis), c.outcome])
    elif fmt == "runs":
        w.writerow(["questions", "exams", "run", "wallMillis", "outcome"])
        for c in grid:
            for i, ms in enumerate(c.run_millis, 1):
                w.writerow([c.questions, c.exams, i, repr(ms), c.outcome])
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    """Read back a ``csv`` or ``runs`` report; numbers come back as int/float."""
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        out = {}
        for k, v in row.items():
            if k in ("questions", "exams", "run"):
                out[k] = int(v)
            elif k in ("meanMillis", "wallMillis"):
                out[k] = float(v)
            else:
                out[k] = v
        rows.append(out)
    return rows
