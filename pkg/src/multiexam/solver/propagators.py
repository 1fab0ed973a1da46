"""Filtering routines for set-variable constraints.

Every propagator exposes ``vars`` (the watched variable ids),
``propagate(store)`` which narrows domains or raises ``Contradiction``, and
``is_entailed(store)`` which evaluates the constraint on decided variables.
Filtering works on bound counts only (bounds consistency); it never enforces
full domain consistency.
"""

from __future__ import annotations

from fractions import Fraction

from .store import Contradiction, InvalidModel, Store


def _check_bounds(lo, hi):
    if lo is not None and hi is not None and lo > hi:
        raise InvalidModel(f"empty bound interval [{lo}, {hi}]")


def _ceil_frac(p: Fraction, c: int) -> int:
    return -((-p.numerator * c) // p.denominator)


def _floor_frac(p: Fraction, c: int) -> int:
    return (p.numerator * c) // p.denominator


def _value_classes(values: dict[int, int]) -> list[tuple[int, int]]:
    """Group elements by property value: sorted ``(value, mask)`` pairs."""
    classes: dict[int, int] = {}
    for element, value in values.items():
        classes[value] = classes.get(value, 0) | (1 << element)
    return sorted(classes.items())


class Propagator:
    vars: tuple[int, ...] = ()

    def propagate(self, store: Store) -> None:
        raise NotImplementedError

    def is_entailed(self, store: Store) -> bool:
        raise NotImplementedError

    def __repr__(self) -> str:
        fields = ", ".join(f"{k}={v!r}" for k, v in vars(self).items() if not k.startswith("_"))
        return f"{type(self).__name__}({fields})"


class Cardinality(Propagator):
    def __init__(self, var: int, lo: int, hi: int):
        if lo < 0 or lo > hi:
            raise InvalidModel(f"bad cardinality interval [{lo}, {hi}]")
        self.var, self.lo, self.hi = var, lo, hi
        self.vars = (var,)

    def propagate(self, store):
        # the store's own normalisation handles forced inclusion/exclusion
        store.update(self.var, card_min=self.lo, card_max=self.hi)

    def is_entailed(self, store):
        return self.lo <= store.vars[self.var].lower.bit_count() <= self.hi


class _SplitCount(Propagator):
    """Shared filtering for "how many elements of the value match" constraints.

    Subclasses supply the admissible match counts for a given set size via
    ``match_range(c) -> (kmin, kmax)``.
    """

    def __init__(self, var: int, mask: int):
        self.var = var
        self.mask = mask
        self.vars = (var,)

    def match_range(self, c: int) -> tuple[int, int]:
        raise NotImplementedError

    def propagate(self, store):
        v = store.vars[self.var]
        m = self.mask
        lower, upper = v.lower, v.upper
        lm = (lower & m).bit_count()
        um = (upper & m).bit_count()
        ln = lower.bit_count() - lm
        un = upper.bit_count() - um

        c_lo = c_hi = None
        k_lo = n_lo = 1 << 30
        k_hi = n_hi = -1
        for c in range(v.card_min, v.card_max + 1):
            kmin, kmax = self.match_range(c)
            # non-matching elements fill the rest
            lo = max(lm, c - un, kmin)
            hi = min(um, c - ln, kmax)
            if lo > hi:
                continue
            if c_lo is None:
                c_lo = c
            c_hi = c
            k_lo = min(k_lo, lo)
            k_hi = max(k_hi, hi)
            n_lo = min(n_lo, c - hi)
            n_hi = max(n_hi, c - lo)
        if c_lo is None:
            raise Contradiction

        include = 0
        keep = -1
        if um == k_lo:
            include |= upper & m
        elif lm == k_hi:
            keep &= lower | ~m
        if un == n_lo:
            include |= upper & ~m
        elif ln == n_hi:
            keep &= lower | m
        store.update(self.var, include, keep, c_lo, c_hi)

    def is_entailed(self, store):
        value = store.vars[self.var].lower
        kmin, kmax = self.match_range(value.bit_count())
        return kmin <= (value & self.mask).bit_count() <= kmax


class CountByPredicate(_SplitCount):
    """``lo <= |value ∩ matching| <= hi``."""

    def __init__(self, var: int, mask: int, lo: int | None = None, hi: int | None = None):
        super().__init__(var, mask)
        _check_bounds(lo, hi)
        self.lo = 0 if lo is None else lo
        self.hi = hi

    def match_range(self, c):
        return self.lo, c if self.hi is None else self.hi


class PercentByPredicate(_SplitCount):
    """``p_min * |value| <= |value ∩ matching| <= p_max * |value|`` in exact arithmetic."""

    def __init__(self, var: int, mask: int, p_min=None, p_max=None):
        super().__init__(var, mask)
        self.p_min = Fraction(0) if p_min is None else Fraction(p_min)
        self.p_max = Fraction(1) if p_max is None else Fraction(p_max)
        if not 0 <= self.p_min <= self.p_max <= 1:
            raise InvalidModel(f"bad percentage interval [{self.p_min}, {self.p_max}]")

    def match_range(self, c):
        return _ceil_frac(self.p_min, c), _floor_frac(self.p_max, c)


class _WeightedSum(Propagator):
    """Sum of a non-negative integer property with size-dependent bounds.

    For every admissible number ``j`` of undecided elements still to be added,
    the achievable completions lie between the ``j`` smallest and the ``j``
    largest undecided values.  Elements are handled per value class: all
    undecided elements with equal value are interchangeable.
    """

    def __init__(self, var: int, values: dict[int, int]):
        for element, value in values.items():
            if value < 0:
                raise InvalidModel(f"negative property value {value} for element {element}")
        self.var = var
        self.values = dict(values)
        self.vars = (var,)
        self._classes = _value_classes(values)

    def sum_range(self, c: int) -> tuple[int, int | None]:
        raise NotImplementedError

    def propagate(self, store):
        v = store.vars[self.var]
        lower, upper = v.lower, v.upper
        undecided = upper & ~lower
        nl = lower.bit_count()
        fixed = 0
        vals: list[int] = []
        class_pos: list[tuple[int, int, int]] = []  # (value, mask, index in vals)
        for value, mask in self._classes:
            fixed += value * (lower & mask).bit_count()
            cnt = (undecided & mask).bit_count()
            if cnt:
                class_pos.append((value, mask, len(vals)))
                vals.extend([value] * cnt)
        d = len(vals)
        pre = [0] * (d + 1)
        for i, x in enumerate(vals):
            pre[i + 1] = pre[i] + x
        total = pre[d]

        def smallest(t):
            return pre[t]

        def largest(t):
            return total - pre[d - t]

        j_min = max(0, v.card_min - nl)
        j_max = min(d, v.card_max - nl)
        feasible = []
        for j in range(j_min, j_max + 1):
            smin, smax = self.sum_range(nl + j)
            if fixed + largest(j) >= smin and (smax is None or fixed + smallest(j) <= smax):
                feasible.append(j)
        if not feasible:
            raise Contradiction

        include = 0
        keep = -1
        for value, mask, r in class_pos:
            # sums over D without one element at sorted position r
            def small_wo(t, r=r, value=value):
                return pre[t] if t <= r else pre[t + 1] - value

            def large_wo(t, r=r, value=value):
                return largest(t) if r < d - t else largest(t + 1) - value

            can_include = False
            can_exclude = False
            for j in feasible:
                smin, smax = self.sum_range(nl + j)
                if not can_include and j >= 1:
                    lo_s = fixed + value + small_wo(j - 1)
                    hi_s = fixed + value + large_wo(j - 1)
                    if hi_s >= smin and (smax is None or lo_s <= smax):
                        can_include = True
                if not can_exclude and j <= d - 1:
                    lo_s = fixed + small_wo(j)
                    hi_s = fixed + large_wo(j)
                    if hi_s >= smin and (smax is None or lo_s <= smax):
                        can_exclude = True
                if can_include and can_exclude:
                    break
            if not can_include and not can_exclude:
                raise Contradiction
            if not can_include:
                keep &= ~(undecided & mask)
            elif not can_exclude:
                include |= undecided & mask
        store.update(self.var, include, keep, nl + feasible[0], nl + feasible[-1])

    def is_entailed(self, store):
        value = store.vars[self.var].lower
        s = sum(w * (value & mask).bit_count() for w, mask in self._classes)
        smin, smax = self.sum_range(value.bit_count())
        return smin <= s and (smax is None or s <= smax)


class SumOfProperty(_WeightedSum):
    def __init__(self, var: int, values: dict[int, int], lo: int | None = None, hi: int | None = None):
        super().__init__(var, values)
        _check_bounds(lo, hi)
        self.lo = 0 if lo is None else lo
        self.hi = hi

    def sum_range(self, c):
        return self.lo, self.hi


class AverageOfProperty(_WeightedSum):
    """``lo * |value| <= sum <= hi * |value|`` (division free, exact)."""

    def __init__(self, var: int, values: dict[int, int], lo=None, hi=None):
        super().__init__(var, values)
        self.lo = None if lo is None else Fraction(lo)
        self.hi = None if hi is None else Fraction(hi)
        _check_bounds(self.lo, self.hi)

    def sum_range(self, c):
        smin = 0 if self.lo is None else max(0, _ceil_frac(self.lo, c))
        smax = None if self.hi is None else _floor_frac(self.hi, c)
        return smin, smax


class DistinctCount(Propagator):
    """Number of distinct property values among the elements of the value."""

    def __init__(self, var: int, values: dict[int, int], lo: int | None = None, hi: int | None = None):
        _check_bounds(lo, hi)
        self.var = var
        self.lo = 0 if lo is None else lo
        self.hi = hi
        self.values = dict(values)
        self.vars = (var,)
        self._classes = _value_classes(values)

    def propagate(self, store):
        v = store.vars[self.var]
        lower, upper = v.lower, v.upper
        forced = [mask for _, mask in self._classes if lower & mask]
        reachable = [mask for _, mask in self._classes if upper & mask]
        if len(reachable) < self.lo or (self.hi is not None and len(forced) > self.hi):
            raise Contradiction
        if self.lo > 0 and v.card_max < self.lo:
            raise Contradiction
        if self.hi is not None and len(forced) == self.hi:
            allowed = 0
            for mask in forced:
                allowed |= mask
            store.update(self.var, keep=allowed | lower)
        elif len(reachable) == self.lo:
            include = 0
            for mask in reachable:
                if not lower & mask:
                    cand = upper & mask
                    if cand & (cand - 1) == 0:
                        include |= cand
            if include:
                store.update(self.var, include=include)

    def is_entailed(self, store):
        value = store.vars[self.var].lower
        n = sum(1 for _, mask in self._classes if value & mask)
        return self.lo <= n and (self.hi is None or n <= self.hi)


class IntersectionCard(Propagator):
    """``lo <= |A ∩ B| <= hi``."""

    def __init__(self, var_a: int, var_b: int, lo: int | None = None, hi: int | None = None):
        if var_a == var_b:
            raise InvalidModel("intersection constraint needs two distinct variables")
        _check_bounds(lo, hi)
        self.var_a, self.var_b = var_a, var_b
        self.lo = 0 if lo is None else lo
        self.hi = hi
        self.vars = (var_a, var_b)

    def propagate(self, store):
        a = store.vars[self.var_a]
        b = store.vars[self.var_b]
        both_lower = a.lower & b.lower
        nl = both_lower.bit_count()
        if self.hi is not None:
            if nl > self.hi:
                raise Contradiction
            if nl == self.hi:
                # anything already in one side cannot join the other side
                store.update(self.var_b, keep=~(a.lower & ~both_lower))
                store.update(self.var_a, keep=~(b.lower & ~both_lower))
        if self.lo:
            both_upper = a.upper & b.upper
            nu = both_upper.bit_count()
            if nu < self.lo:
                raise Contradiction
            if nu == self.lo:
                store.update(self.var_a, include=both_upper)
                store.update(self.var_b, include=both_upper)

    def is_entailed(self, store):
        n = (store.vars[self.var_a].lower & store.vars[self.var_b].lower).bit_count()
        return self.lo <= n and (self.hi is None or n <= self.hi)


class ExamCount(Propagator):
    """Number of variables whose value contains at least one matching element."""

    def __init__(self, vars: tuple[int, ...], mask: int, lo: int | None = None, hi: int | None = None):
        if not vars:
            raise InvalidModel("exam count needs at least one variable")
        _check_bounds(lo, hi)
        self.vars = tuple(vars)
        self.mask = mask
        self.lo = 0 if lo is None else lo
        self.hi = hi

    def propagate(self, store):
        m = self.mask
        sure = 0
        open_vars = []
        for vid in self.vars:
            v = store.vars[vid]
            if v.lower & m:
                sure += 1
            elif v.upper & m:
                open_vars.append(vid)
        if sure + len(open_vars) < self.lo or (self.hi is not None and sure > self.hi):
            raise Contradiction
        if self.hi is not None and sure == self.hi:
            for vid in open_vars:
                store.update(vid, keep=~m)
        elif sure + len(open_vars) == self.lo:
            for vid in open_vars:
                cand = store.vars[vid].upper & m
                if cand & (cand - 1) == 0:
                    store.update(vid, include=cand)

    def is_entailed(self, store):
        n = sum(1 for vid in self.vars if store.vars[vid].lower & self.mask)
        return self.lo <= n and (self.hi is None or n <= self.hi)
