"""
Runtime over pool size and exam count
=====================================

Each cell synthesizes a pool, builds the five-constraint task with a square
hall, and times compile + search three times.  The markdown table uses plain
milliseconds below 5 s, then seconds (s) and minutes (m).

A 2 x 2 block of seats is four mutually adjacent exams.  Four 10-question exams
that pairwise share at most 2 questions need at least 40 - 6 * 2 = 28 distinct
questions, so the 25-question row is infeasible from 4 exams on; the search
runs into the timeout there.
"""

import sys

from multiexam import bench

full = "--full" in sys.argv
questions = bench.TABLE_QUESTIONS if full else (25, 50, 100)
exams = bench.TABLE_EXAMS if full else (1, 10, 100)
timeout = 300.0 if full else 20.0


def report(cell):
    print(f"{cell.questions:5d} x {cell.exams:5d}: {cell.outcome:7s} {cell.mean_millis:10.2f} ms", file=sys.stderr)


grid = bench.run_grid(questions, exams, runs=3, timeout=timeout, progress=report)
print(bench.render(grid, "markdown"))
print(bench.render(grid, "csv"))
