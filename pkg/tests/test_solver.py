from fractions import Fraction
from itertools import chain, combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiexam.solver import (
    AverageOfProperty,
    Contradiction,
    CountByPredicate,
    DistinctCount,
    ExamCount,
    IntersectionCard,
    InvalidModel,
    PercentByPredicate,
    SearchConfig,
    Status,
    Store,
    SumOfProperty,
    solve,
    solve_all,
    to_set,
)

TOPICS = {1: "A", 2: "B", 3: "A"}


def subsets(elements):
    elements = sorted(elements)
    return [frozenset(c) for c in chain.from_iterable(combinations(elements, k) for k in range(len(elements) + 1))]


def as_sets(solutions):
    return {tuple(s) for s in solutions}


# -- add_set_var ---------------------------------------------------------------


def test_add_set_var_working_example():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 2, 3)
    assert s.vars[v].lower_set() == frozenset()
    assert s.vars[v].upper_set() == {1, 2, 3}
    assert (s.vars[v].card_min, s.vars[v].card_max) == (2, 3)


def test_add_set_var_singleton_is_decided():
    s = Store()
    v = s.add_set_var({1}, {1}, 1, 1)
    assert s.vars[v].decided
    assert s.value(v) == {1}


@pytest.mark.parametrize("lower,upper,lo,hi", [({1, 2}, {1}, 0, 2), ((), {1, 2}, 2, 1)])
def test_add_set_var_rejects_invalid(lower, upper, lo, hi):
    with pytest.raises(InvalidModel):
        Store().add_set_var(lower, upper, lo, hi)


# -- propagate ------------------------------------------------------------------


def test_propagate_count_contradiction_on_decided_var():
    s = Store()
    v = s.add_set_var({2}, {2}, 0, 1)
    s.post_count_by_predicate(v, {1, 3}, 2, 2)
    assert s.propagate() is False


def test_propagate_without_propagators_is_noop():
    s = Store()
    s.add_set_var((), {1, 2, 3}, 0, 3)
    before = s.snapshot()
    assert s.propagate() is True
    assert s.snapshot() == before


def test_intersection_prunes_third_element():
    s = Store()
    a = s.add_set_var({1, 2, 3}, {1, 2, 3}, 3, 3)
    b = s.add_set_var({1, 2}, {1, 2, 3}, 0, 3)
    s.post_intersection_card(a, b, None, 2)
    assert s.propagate()
    assert s.vars[b].upper_set() == {1, 2}
    # enumeration agrees: e2 must be exactly {1, 2}
    assert as_sets(solve_all(s)) == {(frozenset({1, 2, 3}), frozenset({1, 2}))}


# -- solve / solve_all on the working example -----------------------------------


def test_working_example_four_solutions():
    s = Store()
    s.add_set_var((), {1, 2, 3}, 2, 3)
    sols = {sol[0] for sol in solve_all(s)}
    assert sols == {frozenset(x) for x in ({1, 2}, {1, 3}, {2, 3}, {1, 2, 3})}
    res = solve(s)
    assert res.status is Status.SAT and res.assignment[0] in sols


def test_working_example_with_topic_count():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 2, 3)
    s.post_count_by_predicate(v, {1, 3}, 2, 2)
    assert {sol[0] for sol in solve_all(s)} == {frozenset({1, 3}), frozenset({1, 2, 3})}


def test_cardinality_exceeding_upper_is_unsat():
    s = Store()
    s.add_set_var((), {1, 2, 3}, 4, 4)
    assert solve(s).status is Status.UNSAT
    assert solve_all(s) == []


def test_timeout_reports_stats():
    s = Store()
    vs = [s.add_set_var((), range(12), 0, 12) for _ in range(3)]
    s.post_intersection_card(vs[0], vs[1], 13, None)  # fails at the root, no search needed
    res = solve(s, SearchConfig(timeout=None, node_limit=1))
    assert res.status is Status.UNSAT
    s2 = Store()
    for _ in range(4):
        s2.add_set_var((), range(10), 0, 10)
    res = solve(s2, SearchConfig(node_limit=3))
    assert res.status is Status.TIMEOUT
    assert res.stats.limit == "nodes" and res.stats.nodes == 4


# -- individual propagators -----------------------------------------------------


def test_cardinality_forces_inclusion_and_exclusion():
    s = Store()
    v = s.add_set_var((), {1, 2, 3})
    s.post_cardinality(v, 3, 3)
    assert s.propagate()
    assert s.vars[v].lower_set() == {1, 2, 3}

    s = Store()
    v = s.add_set_var({1, 2}, {1, 2, 3})
    s.post_cardinality(v, 2, 2)
    assert s.propagate()
    assert s.vars[v].upper_set() == {1, 2}

    s = Store()
    v = s.add_set_var((), {1, 2, 3})
    s.post_cardinality(v, 2, 3)
    assert s.propagate()
    assert s.vars[v].lower_set() == frozenset() and s.vars[v].upper_set() == {1, 2, 3}


def test_count_forces_matching_elements():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 0, 3)
    s.post_count_by_predicate(v, {1, 3}, 2, 2)
    assert s.propagate()
    assert s.vars[v].lower_set() == {1, 3}
    assert {sol[0] for sol in solve_all(s)} == {frozenset({1, 3}), frozenset({1, 2, 3})}


def test_count_without_candidates_fails():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 0, 3)
    s.post_count_by_predicate(v, (), 1, None)
    assert not s.propagate()


def test_percent_fixed_size_ten():
    # 10%..20% of a 10-question exam -> 1 or 2 matches
    p = PercentByPredicate(0, 0b110, Fraction(1, 10), Fraction(1, 5))
    assert p.match_range(10) == (1, 2)


def test_percent_vacuous_bounds():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 0, 3)
    s.post_percent_by_predicate(v, {1}, 0, 1)
    assert len(solve_all(s)) == 8


def test_percent_all_matching_half_is_contradiction():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 2, 3)
    s.post_percent_by_predicate(v, {1, 2, 3}, Fraction(1, 2), Fraction(1, 2))
    assert not s.propagate()


def test_sum_unique_solution():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 2, 2)
    s.post_sum_of_property(v, {1: 10, 2: 20, 3: 30}, 40, 40)
    assert [sol[0] for sol in solve_all(s)] == [frozenset({1, 3})]


def test_sum_unbounded_is_entailed():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 0, 3)
    s.post_sum_of_property(v, {1: 10, 2: 20, 3: 30}, 0, None)
    assert len(solve_all(s)) == 8


def test_average_constant_property_always_entailed():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 1, 3)
    s.post_average_of_property(v, {1: 2, 2: 2, 3: 2}, 2, 2)
    assert len(solve_all(s)) == 7


def test_average_examples():
    s = Store()
    v = s.add_set_var((), {1, 2}, 2, 2)
    s.post_average_of_property(v, {1: 1, 2: 4}, 2, 3)
    assert [sol[0] for sol in solve_all(s)] == [frozenset({1, 2})]

    s = Store()
    v = s.add_set_var((), {1, 2}, 2, 2)
    s.post_average_of_property(v, {1: 1, 2: 1}, 2, 3)
    assert not s.propagate()


def test_distinct_count_examples():
    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 2, 2)
    s.post_distinct_count(v, {1: 1, 2: 1, 3: 2}, 2, None)
    assert {sol[0] for sol in solve_all(s)} == {frozenset({1, 3}), frozenset({2, 3})}

    s = Store()
    v = s.add_set_var((), {1, 2, 3}, 1, 3)
    s.post_distinct_count(v, {1: 1, 2: 1, 3: 2}, 1, None)
    assert len(solve_all(s)) == 7


def test_intersection_examples():
    s = Store()
    a = s.add_set_var({1}, {1}, 1, 1)
    b = s.add_set_var((), {1, 2}, 0, 2)
    s.post_intersection_card(a, b, None, 0)
    assert s.propagate()
    assert 1 not in s.vars[b].upper_set()

    s = Store()
    a = s.add_set_var((), {1, 2}, 0, 2)
    b = s.add_set_var((), {3, 4}, 0, 2)
    s.post_intersection_card(a, b, 2, None)
    assert not s.propagate()


def test_exam_count_examples():
    s = Store()
    a = s.add_set_var({5}, {5}, 1, 1)
    b = s.add_set_var({5, 6}, {5, 6}, 2, 2)
    s.post_exam_count([a, b], {5}, None, 1)
    assert not s.propagate()

    s = Store()
    vs = [s.add_set_var((), {1, 2}, 0, 2) for _ in range(3)]
    s.post_exam_count(vs, {1}, 0, 3)
    assert len(solve_all(s)) == 4**3


# -- brute-force equivalence on random small models ------------------------------

ELEMS = range(1, 7)


def direct_check(kind, args, values):
    """Evaluate a constraint on concrete sets, independent of the propagators."""
    if kind == "count":
        var, match, lo, hi = args
        k = len(values[var] & match)
        return lo <= k and (hi is None or k <= hi)
    if kind == "percent":
        var, match, pmin, pmax = args
        c, k = len(values[var]), len(values[var] & match)
        return pmin * c <= k <= pmax * c
    if kind == "sum":
        var, weights, lo, hi = args
        total = sum(weights[e] for e in values[var])
        return lo <= total and (hi is None or total <= hi)
    if kind == "avg":
        var, weights, lo, hi = args
        c, total = len(values[var]), sum(weights[e] for e in values[var])
        return lo * c <= total <= hi * c
    if kind == "distinct":
        var, weights, lo, hi = args
        k = len({weights[e] for e in values[var]})
        return lo <= k and (hi is None or k <= hi)
    if kind == "inter":
        a, b, lo, hi = args
        k = len(values[a] & values[b])
        return lo <= k and (hi is None or k <= hi)
    if kind == "examcount":
        vs, match, lo, hi = args
        k = sum(1 for v in vs if values[v] & match)
        return lo <= k and (hi is None or k <= hi)
    raise AssertionError(kind)


def post(store, kind, args):
    if kind == "count":
        var, match, lo, hi = args
        return store.post(CountByPredicate(var, sum(1 << e for e in match), lo, hi))
    if kind == "percent":
        var, match, pmin, pmax = args
        return store.post(PercentByPredicate(var, sum(1 << e for e in match), pmin, pmax))
    if kind == "sum":
        return store.post(SumOfProperty(*args))
    if kind == "avg":
        return store.post(AverageOfProperty(*args))
    if kind == "distinct":
        return store.post(DistinctCount(*args))
    if kind == "inter":
        return store.post(IntersectionCard(*args))
    if kind == "examcount":
        vs, match, lo, hi = args
        return store.post(ExamCount(tuple(vs), sum(1 << e for e in match), lo, hi))
    raise AssertionError(kind)


@st.composite
def small_models(draw):
    omega = draw(st.integers(2, 6))
    elems = list(range(1, omega + 1))
    nvars = draw(st.integers(1, 3))
    var_specs = []
    for _ in range(nvars):
        upper = frozenset(draw(st.sets(st.sampled_from(elems), min_size=0)))
        lower = frozenset(draw(st.sets(st.sampled_from(sorted(upper)), max_size=2))) if upper else frozenset()
        lo = draw(st.integers(0, 4))
        hi = draw(st.integers(lo, 5))
        var_specs.append((lower, upper, lo, hi))
    weights = {e: draw(st.integers(0, 4)) for e in elems}
    subset = st.frozensets(st.sampled_from(elems))
    var = st.integers(0, nvars - 1)
    cons = []
    for _ in range(draw(st.integers(0, 3))):
        kind = draw(st.sampled_from(["count", "percent", "sum", "avg", "distinct", "inter", "examcount"]))
        lo = draw(st.integers(0, 3))
        hi = draw(st.one_of(st.none(), st.integers(lo, 6)))
        if kind == "count":
            cons.append((kind, (draw(var), draw(subset), lo, hi)))
        elif kind == "percent":
            a = Fraction(draw(st.integers(0, 4)), 4)
            b = Fraction(draw(st.integers(0, 4)), 4)
            cons.append((kind, (draw(var), draw(subset), min(a, b), max(a, b))))
        elif kind == "sum":
            cons.append((kind, (draw(var), weights, lo * 2, None if hi is None else hi * 2)))
        elif kind == "avg":
            a = Fraction(draw(st.integers(0, 8)), 2)
            b = Fraction(draw(st.integers(0, 8)), 2)
            cons.append((kind, (draw(var), weights, min(a, b), max(a, b))))
        elif kind == "distinct":
            cons.append((kind, (draw(var), weights, lo, hi)))
        elif kind == "inter" and nvars >= 2:
            a, b = draw(st.lists(var, min_size=2, max_size=2, unique=True))
            cons.append((kind, (a, b, lo, hi)))
        elif kind == "examcount":
            cons.append((kind, (list(range(nvars)), draw(subset), min(lo, nvars), None if hi is None else min(max(hi, lo), nvars))))
    return omega, var_specs, cons


def build(var_specs, cons):
    s = Store()
    for lower, upper, lo, hi in var_specs:
        s.add_set_var(lower, upper, lo, hi)
    for kind, args in cons:
        post(s, kind, args)
    return s


def brute_force(var_specs, cons):
    domains = [
        [x for x in subsets(upper) if lower <= x and lo <= len(x) <= hi] for lower, upper, lo, hi in var_specs
    ]
    return {
        combo for combo in product(*domains) if all(direct_check(kind, args, combo) for kind, args in cons)
    }


@settings(max_examples=300, deadline=None)
@given(small_models())
def test_solve_all_matches_brute_force(model):
    _, var_specs, cons = model
    store = build(var_specs, cons)
    found = [tuple(s) for s in solve_all(store)]
    assert len(found) == len(set(found))
    assert set(found) == brute_force(var_specs, cons)


@settings(max_examples=200, deadline=None)
@given(small_models())
def test_solve_is_sound_and_deterministic(model):
    _, var_specs, cons = model
    store = build(var_specs, cons)
    first = solve(store, SearchConfig(trace=True))
    second = solve(store, SearchConfig(trace=True))
    assert first.status == second.status
    assert first.assignment == second.assignment
    assert first.stats.trace == second.stats.trace
    if first.sat:
        assert all(direct_check(kind, args, first.assignment) for kind, args in cons)


@settings(max_examples=200, deadline=None)
@given(small_models(), st.data())
def test_fixpoint_idempotent_monotone_and_undo_exact(model, data):
    _, var_specs, cons = model
    store = build(var_specs, cons)
    if not store.propagate():
        return
    snap = store.snapshot()
    assert store.propagate()
    assert store.snapshot() == snap  # nothing left to do at a fixpoint

    undecided = [(v.id, e) for v in store.vars for e in to_set(v.upper & ~v.lower)]
    if not undecided:
        return
    vid, elem = data.draw(st.sampled_from(undecided))
    include = data.draw(st.booleans())
    cp = store.checkpoint()
    try:
        if include:
            store.update(vid, include=1 << elem)
        else:
            store.update(vid, keep=~(1 << elem))
        store.propagate()
    except Contradiction:
        pass
    # trail entries record narrowing only
    for v, lo, up, cmin, cmax in store.trail[cp:]:
        cur = store.vars[v]
        assert lo & ~cur.lower == 0
        assert cur.upper & ~up == 0
        assert cur.card_min >= cmin and cur.card_max <= cmax
    store.undo(cp)
    assert store.snapshot() == snap


def test_random_value_order_is_seed_deterministic():
    s = Store()
    for _ in range(2):
        s.add_set_var((), range(1, 8), 3, 3)
    s.post_intersection_card(0, 1, None, 1)
    cfg = SearchConfig(value_order="random", seed=11, trace=True)
    a, b = solve(s, cfg), solve(s, cfg)
    assert a.assignment == b.assignment and a.stats.trace == b.stats.trace
    assert set(map(tuple, solve_all(s, config=cfg))) == set(map(tuple, solve_all(s)))


def test_solve_all_limit():
    s = Store()
    s.add_set_var((), {1, 2, 3}, 0, 3)
    assert len(solve_all(s, limit=3)) == 3
    assert solve_all(s, limit=0) == []


def test_restarts_find_same_kind_of_solution():
    s = Store()
    vs = [s.add_set_var((), range(1, 10), 4, 4) for _ in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            s.post_intersection_card(vs[i], vs[j], None, 1)
    res = solve(s, SearchConfig(value_order="random", restarts=True, restart_base=1, seed=3))
    assert res.sat
    a, b, c = res.assignment
    assert len(a & b) <= 1 and len(a & c) <= 1 and len(b & c) <= 1
