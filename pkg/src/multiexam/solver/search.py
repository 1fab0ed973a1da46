"""Depth-first binary branching over set variables.

A decision picks an undecided variable and its smallest undecided element,
tries "element in value" first and "element not in value" on backtrack.
"""

from __future__ import annotations

import enum
import random
import time
from collections.abc import Iterator
from dataclasses import dataclass, field

from .store import Contradiction, Store, iter_bits, to_set


class Status(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class SearchConfig:
    timeout: float | None = 300.0
    node_limit: int | None = None
    seed: int = 0
    # "input": lowest undecided variable; "fail_first": smallest |upper| - card_min
    var_order: str = "input"
    # "min": smallest undecided element; "random": seeded choice
    value_order: str = "min"
    # Luby-scheduled restarts in solve(); only useful with value_order="random"
    restarts: bool = False
    restart_base: int = 200
    trace: bool = False

    def __post_init__(self):
        if self.var_order not in ("input", "fail_first"):
            raise ValueError(f"unknown var_order {self.var_order!r}")
        if self.value_order not in ("min", "random"):
            raise ValueError(f"unknown value_order {self.value_order!r}")


@dataclass
class SearchStats:
    nodes: int = 0
    backtracks: int = 0
    propagations: int = 0
    solutions: int = 0
    wall_seconds: float = 0.0
    restarts: int = 0
    limit: str | None = None  # "time", "nodes" or "restart" when the search was cut off
    trace: list[tuple[int, int, bool]] = field(default_factory=list)


@dataclass
class SolveResult:
    status: Status
    assignment: list[frozenset[int]] | None
    stats: SearchStats

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


class SearchLimit(Exception):
    """The time or node budget ran out before the search finished."""

    def __init__(self, stats: SearchStats):
        super().__init__(f"search stopped ({stats.limit} limit) after {stats.nodes} nodes")
        self.stats = stats


def _choose(store: Store, start: int, config: SearchConfig, rng: random.Random | None):
    vars = store.vars
    if config.var_order == "input":
        for i in range(start, len(vars)):
            v = vars[i]
            if v.lower != v.upper:
                break
        else:
            return None
    else:
        best = None
        for v in vars:
            if v.lower != v.upper:
                slack = v.upper.bit_count() - v.card_min
                if best is None or slack < best[0]:
                    best = (slack, v)
        if best is None:
            return None
        v = best[1]
    undecided = v.upper & ~v.lower
    if rng is None:
        elem = (undecided & -undecided).bit_length() - 1
    else:
        elem = rng.choice(list(iter_bits(undecided)))
    return v.id, elem


def _apply(store: Store, vid: int, include: int = 0, keep: int = -1) -> bool:
    try:
        store.update(vid, include=include, keep=keep)
    except Contradiction:
        store.clear_queue()
        return False
    return store.propagate()


def _entailed(store: Store) -> bool:
    return all(p.is_entailed(store) for p in store.propagators)


def luby(i: int) -> int:
    """i-th term (1-based) of the Luby sequence 1 1 2 1 1 2 4 1 1 2 ..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


def iter_solutions(store: Store, config: SearchConfig | None = None, stats: SearchStats | None = None) -> Iterator[list[frozenset[int]]]:
    """Yield every solution in depth-first order.

    Raises ``SearchLimit`` when the time or node budget runs out.  The store is
    restored to its pre-search domains when the generator finishes or is closed.
    """
    config = config or SearchConfig()
    stats = stats if stats is not None else SearchStats()
    rng = random.Random(config.seed) if config.value_order == "random" else None
    deadline = None if config.timeout is None else time.perf_counter() + config.timeout
    return _search(store, config, stats, rng, deadline, None)


def _search(store, config, stats, rng, deadline, fail_limit):
    t0 = time.perf_counter()
    fails0 = stats.backtracks
    root = store.checkpoint()
    prop0 = store.propagations
    store.clear_queue()
    store.schedule_all()
    # stack entries: (checkpoint, var, elem, exclude_tried)
    stack: list[tuple[int, int, int, bool]] = []
    try:
        ok = store.propagate()
        while True:
            if ok:
                stats.nodes += 1
                if config.node_limit is not None and stats.nodes > config.node_limit:
                    stats.limit = "nodes"
                    raise SearchLimit(stats)
                if deadline is not None and time.perf_counter() > deadline:
                    stats.limit = "time"
                    raise SearchLimit(stats)
                start = stack[-1][1] if stack else 0
                choice = _choose(store, start, config, rng)
                if choice is None:
                    if _entailed(store):
                        stats.solutions += 1
                        yield [to_set(v.lower) for v in store.vars]
                    ok = False
                    continue
                vid, elem = choice
                stack.append((store.checkpoint(), vid, elem, False))
                if config.trace:
                    stats.trace.append((vid, elem, True))
                ok = _apply(store, vid, include=1 << elem)
                continue
            # failure: resume the most recent untried alternative
            stats.backtracks += 1
            if fail_limit is not None and stats.backtracks - fails0 > fail_limit:
                stats.limit = "restart"
                raise SearchLimit(stats)
            while stack:
                cp, vid, elem, excluded = stack.pop()
                store.undo(cp)
                if not excluded:
                    stack.append((cp, vid, elem, True))
                    if config.trace:
                        stats.trace.append((vid, elem, False))
                    ok = _apply(store, vid, keep=~(1 << elem))
                    break
            else:
                return
    finally:
        store.clear_queue()
        store.undo(root)
        stats.propagations += store.propagations - prop0
        stats.wall_seconds += time.perf_counter() - t0


def solve(store: Store, config: SearchConfig | None = None) -> SolveResult:
    config = config or SearchConfig()
    stats = SearchStats()
    rng = random.Random(config.seed) if config.value_order == "random" else None
    deadline = None if config.timeout is None else time.perf_counter() + config.timeout
    run = 1
    while True:
        fail_limit = config.restart_base * luby(run) if config.restarts else None
        gen = _search(store, config, stats, rng, deadline, fail_limit)
        try:
            assignment = next(gen)
        except StopIteration:
            return SolveResult(Status.UNSAT, None, stats)
        except SearchLimit:
            if stats.limit != "restart":
                return SolveResult(Status.TIMEOUT, None, stats)
            stats.limit = None
            stats.restarts += 1
            run += 1
            continue
        finally:
            gen.close()
        return SolveResult(Status.SAT, assignment, stats)


def solve_all(store: Store, limit: int | None = None, config: SearchConfig | None = None) -> list[list[frozenset[int]]]:
    """Enumerate solutions (at most ``limit``) in deterministic search order.

    Raises ``SearchLimit`` if the budget runs out before enumeration ends.
    """
    out: list[list[frozenset[int]]] = []
    if limit is not None and limit <= 0:
        return out
    gen = iter_solutions(store, config)
    try:
        for sol in gen:
            out.append(sol)
            if limit is not None and len(out) >= limit:
                break
    finally:
        gen.close()
    return out
