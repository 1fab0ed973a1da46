"""Lecture-hall grid, row-major exam placement and the 8-cell neighbourhood."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt


@dataclass(frozen=True)
class SeatingChart:
    rows: int
    seats_per_row: int
    # seat of exam i (1-based) at assignment[i - 1]; (row, seat), both 1-based
    assignment: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.rows < 1 or self.seats_per_row < 1:
            raise ValueError(f"hall {self.rows}x{self.seats_per_row} must have positive dimensions")
        if len(self.assignment) > self.rows * self.seats_per_row:
            raise ValueError(f"{len(self.assignment)} exams do not fit a {self.rows}x{self.seats_per_row} hall")
        if len(set(self.assignment)) != len(self.assignment):
            raise ValueError("two exams share a seat")
        for r, s in self.assignment:
            if not (1 <= r <= self.rows and 1 <= s <= self.seats_per_row):
                raise ValueError(f"seat ({r}, {s}) lies outside the hall")
        object.__setattr__(self, "_by_seat", {seat: i for i, seat in enumerate(self.assignment, start=1)})

    @property
    def exams(self) -> int:
        return len(self.assignment)

    def seat_of(self, exam: int) -> tuple[int, int]:
        if not 1 <= exam <= len(self.assignment):
            raise KeyError(f"exam {exam} has no seat")
        return self.assignment[exam - 1]

    def exam_at(self, row: int, seat: int) -> int | None:
        return self._by_seat.get((row, seat))


def row_major(rows: int, seats_per_row: int, n: int) -> SeatingChart:
    """Seat exams 1..n row by row, left to right."""
    if n < 0:
        raise ValueError("exam count must be non-negative")
    seats = tuple((1 + k // seats_per_row, 1 + k % seats_per_row) for k in range(n))
    return SeatingChart(rows, seats_per_row, seats)


def auto_chart(n: int) -> SeatingChart:
    """Square hall of side ceil(sqrt(n))."""
    if n < 1:
        raise ValueError("exam count must be >= 1")
    side = isqrt(n - 1) + 1
    return row_major(side, side, n)


def neighbors(chart: SeatingChart, exam: int) -> list[int]:
    """Occupied seats among the 8 cells around ``exam``'s seat, ascending."""
    r, s = chart.seat_of(exam)
    out = []
    for dr in (-1, 0, 1):
        for ds in (-1, 0, 1):
            if dr == 0 and ds == 0:
                continue
            other = chart.exam_at(r + dr, s + ds)
            if other is not None:
                out.append(other)
    return sorted(out)


def neighbor_pairs(chart: SeatingChart) -> list[tuple[int, int]]:
    """Every adjacent pair ``(i, j)`` with ``i < j`` exactly once, sorted."""
    pairs = []
    for i in range(1, chart.exams + 1):
        for j in neighbors(chart, i):
            if i < j:
                pairs.append((i, j))
    return pairs
