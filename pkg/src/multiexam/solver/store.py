"""Set-variable domain store with a trail and a propagation queue.

Set values are kept as integer bitmasks: bit ``e`` is set when element ``e``
belongs to the set.  Public entry points accept and return ordinary Python
sets; propagators work on the masks directly.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass


class InvalidModel(ValueError):
    """Raised when a variable or constraint is posted with impossible arguments."""


class Contradiction(Exception):
    """Signalled by a propagator when the current domains admit no solution."""


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 0:
            raise InvalidModel(f"element ids must be non-negative, got {e}")
        mask |= 1 << e
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_set(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


@dataclass
class SetVar:
    """Bounds of one set variable: ``lower <= value <= upper``, ``|value|`` in
    ``[card_min, card_max]``."""

    id: int
    lower: int
    upper: int
    card_min: int
    card_max: int

    @property
    def decided(self) -> bool:
        return self.lower == self.upper

    def lower_set(self) -> frozenset[int]:
        return to_set(self.lower)

    def upper_set(self) -> frozenset[int]:
        return to_set(self.upper)


class Store:
    """Variables, posted propagators, the undo trail and the activation queue."""

    def __init__(self) -> None:
        self.vars: list[SetVar] = []
        self.propagators: list = []
        self._watchers: list[list[int]] = []
        self._queue: deque[int] = deque()
        self._queued: list[bool] = []
        # (var id, lower, upper, card_min, card_max) before each change
        self.trail: list[tuple[int, int, int, int, int]] = []
        self.propagations = 0
        self._root_failed = False

    # -- model construction -------------------------------------------------

    def add_set_var(
        self,
        lower: Iterable[int] = (),
        upper: Iterable[int] = (),
        card_min: int = 0,
        card_max: int | None = None,
    ) -> int:
        lo, up = to_mask(lower), to_mask(upper)
        if lo & ~up:
            raise InvalidModel("lower bound is not a subset of the upper bound")
        if card_max is None:
            card_max = up.bit_count()
        if card_min < 0 or card_min > card_max:
            raise InvalidModel(f"bad cardinality interval [{card_min}, {card_max}]")
        vid = len(self.vars)
        self.vars.append(SetVar(vid, lo, up, card_min, card_max))
        self._watchers.append([])
        mark = self.checkpoint()
        try:
            self.update(vid)
        except Contradiction:
            # reported by the first propagate call
            self._root_failed = True
        # root-level normalisation is not undoable
        del self.trail[mark:]
        return vid

    def post(self, propagator) -> int:
        pid = len(self.propagators)
        self.propagators.append(propagator)
        self._queued.append(False)
        for vid in propagator.vars:
            if not 0 <= vid < len(self.vars):
                raise InvalidModel(f"unknown variable {vid}")
            if pid not in self._watchers[vid]:
                self._watchers[vid].append(pid)
        self._enqueue(pid)
        return pid

    # convenience posting, mirroring the propagator constructors

    def post_cardinality(self, var: int, lo: int, hi: int) -> int:
        from .propagators import Cardinality

        return self.post(Cardinality(var, lo, hi))

    def post_count_by_predicate(self, var: int, matching: Iterable[int], lo=None, hi=None) -> int:
        from .propagators import CountByPredicate

        return self.post(CountByPredicate(var, to_mask(matching), lo, hi))

    def post_percent_by_predicate(self, var: int, matching: Iterable[int], p_min=None, p_max=None) -> int:
        from .propagators import PercentByPredicate

        return self.post(PercentByPredicate(var, to_mask(matching), p_min, p_max))

    def post_sum_of_property(self, var: int, values: dict[int, int], lo=None, hi=None) -> int:
        from .propagators import SumOfProperty

        return self.post(SumOfProperty(var, values, lo, hi))

    def post_average_of_property(self, var: int, values: dict[int, int], lo=None, hi=None) -> int:
        from .propagators import AverageOfProperty

        return self.post(AverageOfProperty(var, values, lo, hi))

    def post_distinct_count(self, var: int, values: dict[int, int], lo=None, hi=None) -> int:
        from .propagators import DistinctCount

        return self.post(DistinctCount(var, values, lo, hi))

    def post_intersection_card(self, var_a: int, var_b: int, lo=None, hi=None) -> int:
        from .propagators import IntersectionCard

        return self.post(IntersectionCard(var_a, var_b, lo, hi))

    def post_exam_count(self, vars: Iterable[int], matching: Iterable[int], lo=None, hi=None) -> int:
        from .propagators import ExamCount

        return self.post(ExamCount(tuple(vars), to_mask(matching), lo, hi))

    # -- domain access for propagators --------------------------------------

    def update(
        self,
        vid: int,
        include: int = 0,
        keep: int = -1,
        card_min: int = 0,
        card_max: int | None = None,
    ) -> bool:
        """Narrow variable ``vid``: add ``include`` to lower, intersect upper
        with ``keep`` and tighten the cardinality interval.

        Returns True when anything changed.  Raises Contradiction when the
        domain becomes empty.
        """
        v = self.vars[vid]
        lower = v.lower | include
        upper = v.upper & keep
        cmin = v.card_min if card_min <= v.card_min else card_min
        cmax = v.card_max if card_max is None or card_max >= v.card_max else card_max
        if lower & ~upper:
            raise Contradiction
        nl = lower.bit_count()
        nu = upper.bit_count()
        if nl > cmin:
            cmin = nl
        if nu < cmax:
            cmax = nu
        if cmin > cmax:
            raise Contradiction
        if nl == cmax:
            upper = lower
        elif nu == cmin:
            lower = upper
        if lower == v.lower and upper == v.upper and cmin == v.card_min and cmax == v.card_max:
            return False
        self.trail.append((vid, v.lower, v.upper, v.card_min, v.card_max))
        v.lower, v.upper, v.card_min, v.card_max = lower, upper, cmin, cmax
        for pid in self._watchers[vid]:
            if not self._queued[pid]:
                self._queued[pid] = True
                self._queue.append(pid)
        return True

    def include(self, vid: int, mask: int) -> bool:
        return self.update(vid, include=mask)

    def exclude(self, vid: int, mask: int) -> bool:
        return self.update(vid, keep=~mask)

    # -- propagation --------------------------------------------------------

    def _enqueue(self, pid: int) -> None:
        if not self._queued[pid]:
            self._queued[pid] = True
            self._queue.append(pid)

    def schedule_all(self) -> None:
        for pid in range(len(self.propagators)):
            self._enqueue(pid)

    def clear_queue(self) -> None:
        for pid in self._queue:
            self._queued[pid] = False
        self._queue.clear()

    def propagate(self) -> bool:
        """Run queued propagators to a fixpoint.

        Returns True at a fixpoint, False on contradiction (queue is cleared
        and the caller is expected to undo).
        """
        if self._root_failed:
            self.clear_queue()
            return False
        queue, queued, props = self._queue, self._queued, self.propagators
        try:
            while queue:
                pid = queue.popleft()
                queued[pid] = False
                self.propagations += 1
                props[pid].propagate(self)
        except Contradiction:
            self.clear_queue()
            return False
        return True

    propagate_fixpoint = propagate

    # -- trail --------------------------------------------------------------

    def checkpoint(self) -> int:
        return len(self.trail)

    def undo(self, checkpoint: int) -> None:
        trail, vars = self.trail, self.vars
        while len(trail) > checkpoint:
            vid, lo, up, cmin, cmax = trail.pop()
            v = vars[vid]
            v.lower, v.upper, v.card_min, v.card_max = lo, up, cmin, cmax

    # -- inspection ---------------------------------------------------------

    def snapshot(self) -> tuple[tuple[int, int, int, int], ...]:
        return tuple((v.lower, v.upper, v.card_min, v.card_max) for v in self.vars)

    def all_decided(self) -> bool:
        return all(v.lower == v.upper for v in self.vars)

    def value(self, vid: int) -> frozenset[int]:
        v = self.vars[vid]
        if v.lower != v.upper:
            raise ValueError(f"variable {vid} is not decided")
        return to_set(v.lower)
