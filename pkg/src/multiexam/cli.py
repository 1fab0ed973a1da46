"""Command-line front end: ``multiexam generate|validate|synth|task|bench``.

Exit codes: 0 sat/valid, 1 unsat/invalid, 2 timeout, 3 usage or input error.
Data goes to stdout (or ``--out``); stats and logs go to stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import bench, io, synth
from . import model as m
from .compiler import CompileError, compile_task, exam_config
from .solver import SearchLimit, SearchStats, Status, iter_solutions, solve
from .validate import validate

EXIT_OK, EXIT_NO, EXIT_TIMEOUT, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _log(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _stats_line(status: str, stats: SearchStats, millis: float) -> str:
    return (
        f"status={status} wallMillis={millis:.2f} nodes={stats.nodes} "
        f"backtracks={stats.backtracks} propagations={stats.propagations}"
    )


def _numbered(out: str, i: int, k: int) -> Path:
    p = Path(out)
    return p.with_name(f"{p.stem}-{i:0{len(str(k))}d}{p.suffix}")


def cmd_generate(args) -> int:
    pool = io.load_pool(args.pool)
    task = io.load_task(args.task)
    t0 = time.perf_counter()
    try:
        compiled = compile_task(pool, task)
    except CompileError as exc:
        raise UsageError(str(exc)) from None
    config = exam_config(seed=args.seed, timeout=args.timeout)

    if args.all is None:
        result = solve(compiled.store, config)
        millis = (time.perf_counter() - t0) * 1000.0
        _log(args, _stats_line(result.status.value, result.stats, millis))
        if not result.sat:
            return EXIT_NO if result.status is Status.UNSAT else EXIT_TIMEOUT
        sol = m.Solution(compiled.decode(result.assignment), _solution_stats(result.stats, millis))
        _emit(io.dumps(io.solution_to_obj(sol, timing=args.timing)), args.out)
        return EXIT_OK

    # enumerate up to K solutions into numbered files
    if args.all < 1:
        raise UsageError("--all needs a positive solution count")
    if args.out is None:
        raise UsageError("--all writes numbered files and needs --out")
    stats = SearchStats()
    found, status = 0, Status.UNSAT
    gen = iter_solutions(compiled.store, config, stats)
    try:
        for assignment in gen:
            found += 1
            millis = (time.perf_counter() - t0) * 1000.0
            sol = m.Solution(compiled.decode(assignment), _solution_stats(stats, millis))
            path = _numbered(args.out, found, args.all)
            path.write_text(io.dumps(io.solution_to_obj(sol, timing=args.timing)), encoding="utf-8")
            status = Status.SAT
            if found >= args.all:
                break
    except SearchLimit:
        status = Status.TIMEOUT
    finally:
        gen.close()
    millis = (time.perf_counter() - t0) * 1000.0
    _log(args, _stats_line(status.value, stats, millis) + f" solutions={found}")
    return {Status.SAT: EXIT_OK, Status.UNSAT: EXIT_NO, Status.TIMEOUT: EXIT_TIMEOUT}[status]


def _solution_stats(stats: SearchStats, millis: float) -> m.SolutionStats:
    return m.SolutionStats(millis, stats.nodes, stats.backtracks, stats.propagations)


def cmd_validate(args) -> int:
    pool = io.load_pool(args.pool)
    task = io.load_task(args.task)
    solution = io.load_solution(args.solution)
    report = validate(pool, task, solution)
    for v in report.violations:
        print(v)
    _log(args, f"{len(report.violations)} violation(s)")
    return EXIT_OK if report.valid else EXIT_NO


def cmd_synth(args) -> int:
    try:
        domains = m.Domains(
            topics=args.topics,
            levels=args.levels,
            max_min_duration=args.max_min_duration,
            max_max_duration=args.max_max_duration,
            types=args.types,
            max_points=args.max_points,
        )
        pool = synth.synth_pool(args.omega, args.seed, domains)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(io.dumps(io.pool_to_obj(pool)), args.out)
    return EXIT_OK


def cmd_task(args) -> int:
    if args.rows is not None or args.seats is not None:
        if args.rows is None or args.seats is None:
            raise UsageError("--rows and --seats go together")
        seating = (args.rows, args.seats)
    else:
        seating = m.AUTO
    try:
        task = synth.standard_task(args.exams, args.per_exam, seating)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(io.dumps(io.task_to_obj(task)), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    if any(x < 1 for x in args.questions + args.exams):
        raise UsageError("grid sizes must be >= 1")

    def progress(cell):
        _log(args, f"{cell.questions}x{cell.exams}: {cell.outcome} mean={cell.mean_millis:.2f}ms runs={cell.runs}")

    grid = bench.run_grid(
        args.questions, args.exams, args.runs, args.timeout, args.seed, args.per_exam, args.parallel, progress
    )
    _emit(bench.render(grid, args.format), args.out)
    return EXIT_OK


def _sizes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _timeout(text: str) -> float | None:
    value = float(text)
    return None if value <= 0 else value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (defaults per command)")
    common.add_argument("--quiet", "-q", action="store_true", help="no stats on stderr")
    common.add_argument("--out", "-o", help="output file (default: stdout)")

    p = _Parser(prog="multiexam", description="Generate individualized exams from a question pool.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", parents=[common], help="solve a task against a pool")
    g.add_argument("--pool", required=True)
    g.add_argument("--task", required=True)
    g.add_argument("--timeout", type=_timeout, default=300.0, help="seconds; 0 = none (default 300)")
    g.add_argument("--all", type=int, metavar="K", help="write up to K solutions to numbered files")
    g.add_argument("--timing", action="store_true", help="record wall time in the solution file")
    g.set_defaults(func=cmd_generate, default_seed=0)

    v = sub.add_parser("validate", parents=[common], help="check a solution independently of the solver")
    v.add_argument("--pool", required=True)
    v.add_argument("--task", required=True)
    v.add_argument("--solution", required=True)
    v.set_defaults(func=cmd_validate, default_seed=0)

    s = sub.add_parser("synth", parents=[common], help="write a random question pool")
    s.add_argument("--omega", type=int, required=True, help="number of questions")
    d = m.Domains()
    s.add_argument("--topics", type=int, default=d.topics)
    s.add_argument("--levels", type=int, default=d.levels)
    s.add_argument("--max-min-duration", type=int, default=d.max_min_duration)
    s.add_argument("--max-max-duration", type=int, default=d.max_max_duration)
    s.add_argument("--types", type=int, default=d.types)
    s.add_argument("--max-points", type=int, default=d.max_points)
    s.set_defaults(func=cmd_synth, default_seed=synth.DEFAULT_SEED)

    t = sub.add_parser("task", parents=[common], help="write the five-constraint exam task")
    t.add_argument("--exams", "-n", type=int, required=True)
    t.add_argument("--per-exam", "-m", type=int, default=10)
    t.add_argument("--rows", type=int)
    t.add_argument("--seats", type=int, help="seats per row (default: auto square hall)")
    t.set_defaults(func=cmd_task, default_seed=0)

    b = sub.add_parser("bench", parents=[common], help="time the questions x exams grid")
    b.add_argument("--questions", type=_sizes, default=list(bench.TABLE_QUESTIONS))
    b.add_argument("--exams", type=_sizes, default=list(bench.TABLE_EXAMS))
    b.add_argument("--runs", type=int, default=3)
    b.add_argument("--timeout", type=_timeout, default=bench.DEFAULT_TIMEOUT)
    b.add_argument("--per-exam", "-m", type=int, default=10)
    b.add_argument("--format", choices=bench.FORMATS, default="markdown")
    b.add_argument("--parallel", type=int, default=0, help="worker processes (outcomes only; timings interfere)")
    b.set_defaults(func=cmd_bench, default_seed=synth.DEFAULT_SEED)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = args.default_seed
    try:
        return args.func(args)
    except (io.FormatError, m.ModelError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
