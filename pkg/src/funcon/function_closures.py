"""Function-side closure operators: variable substitution and local closure.

``vs_closure`` realizes closure under simple variable substitutions (the class
composed with the projection clone); ``lo_m_closure`` adds every function whose
restriction to each size-<=m subset of its domain agrees with some member.  On
finite domains the unparametrized local closure is the identity, which
``lo_closure`` asserts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (
    DEFAULT_ENUMERATION_BUDGET,
    ArityMismatchError,
    BudgetExceededError,
    FunctionClass,
    FunctionTable,
    function_count,
    tuple_unrank,
)
from .satisfaction import _all_tables


@dataclass(frozen=True)
class SubstitutionMap:
    """Assignment of each source coordinate to a target coordinate (1-based)."""

    source_arity: int
    target_arity: int
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if self.source_arity < 1 or self.target_arity < 1:
            raise ValueError("arities must be >= 1")
        if len(self.assignment) != self.source_arity:
            raise ArityMismatchError(
                f"assignment length {len(self.assignment)} != source arity {self.source_arity}"
            )
        for a in self.assignment:
            if not 1 <= a <= self.target_arity:
                raise ValueError(f"assignment entry {a} out of range 1..{self.target_arity}")


def substitute(f: FunctionTable, s: SubstitutionMap) -> FunctionTable:
    """g(x1..xt) = f(x_{s(1)}, ..., x_{s(n)}) — a simple variable substitution."""
    if s.source_arity != f.arity:
        raise ArityMismatchError(f"substitution source arity {s.source_arity} != function arity {f.arity}")
    size = f.dom.size
    t = s.target_arity
    table = []
    for rank in range(size**t):
        x = tuple_unrank(rank, size, t)
        r = 0
        for a in s.assignment:
            r = r * size + x[a - 1]
        table.append(f.table[r])
    return FunctionTable(f.dom, f.cod, t, tuple(table))


def _all_maps(source: int, target: int):
    for assignment in itertools.product(range(1, target + 1), repeat=source):
        yield SubstitutionMap(source, target, assignment)


def vs_n_closure(k_n: FunctionClass) -> FunctionClass:
    """Closure of a single-arity class under arity-preserving substitutions."""
    arities = k_n.arities()
    if len(arities) > 1:
        raise ArityMismatchError(f"expected a single arity, got {arities}")
    if not arities:
        return k_n
    n = arities[0]
    out = set(k_n.members(n))
    for f in k_n.members(n):
        for s in _all_maps(n, n):
            out.add(substitute(f, s))
    return FunctionClass.from_tables(k_n.dom, k_n.cod, out)


def vs_closure(k: FunctionClass, cap: int) -> FunctionClass:
    """All substitution instances of members at target arities 1..cap.

    Arbitrary maps n -> t cover identification, permutation and dummy-argument
    addition at once; this equals composing the class with the projection clone.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    out: set[FunctionTable] = set()
    for n in k.arities():
        for f in k.members(n):
            for t in range(1, cap + 1):
                for s in _all_maps(n, t):
                    out.add(substitute(f, s))
    return FunctionClass.from_tables(k.dom, k.cod, out)


def lo_m_closure(
    k: FunctionClass, m: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> FunctionClass:
    """Per arity, every function agreeing with some member on each small subset.

    Agreement on all subsets of size <= m is equivalent to agreement on all
    subsets of size exactly min(m, |A|^n), since a witness restricts.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    dom, cod = k.dom, k.cod
    result: dict[int, set[FunctionTable]] = {}
    for n in k.arities():
        count = function_count(dom, cod, n)
        if count > budget:
            raise BudgetExceededError(
                f"lo_{m} closure at arity {n} needs {count} candidates, exceeding budget {budget}",
                count,
            )
        members = sorted(k.members(n), key=lambda f: f.table)
        points = dom.size**n
        d = min(m, points)
        subsets = list(itertools.combinations(range(points), d))
        # value patterns of the class on each subset, indexed once
        patterns = [
            frozenset(tuple(f.table[p] for p in subset) for f in members)
            for subset in subsets
        ]
        kept = set()
        for g in _all_tables(dom, cod, n, budget):
            table = g.table
            if all(
                tuple(table[p] for p in subset) in pats
                for subset, pats in zip(subsets, patterns)
            ):
                kept.add(g)
        result[n] = kept
    return FunctionClass(dom, cod, {n: frozenset(s) for n, s in result.items()})


def lo_closure(k: FunctionClass, budget: int = DEFAULT_ENUMERATION_BUDGET) -> FunctionClass:
    """The unparametrized local closure; the identity on finite domains."""
    if not k.arities():
        return k
    m = max(k.dom.size**n for n in k.arities())
    closed = lo_m_closure(k, m, budget)
    assert closed == k, "local closure must be the identity on finite domains"
    return closed
