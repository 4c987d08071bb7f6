"""Class composition, images, the satisfaction relation, and the Galois maps.

``fsc_n`` and ``csf_m`` realize the two directions of the correspondence at
fixed arities; ``trace_constraint`` builds the canonical separating constraint
whose antecedent lists chosen columns and whose consequent collects the class's
values on them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core import (
    DEFAULT_ENUMERATION_BUDGET,
    ArityMismatchError,
    BudgetExceededError,
    Constraint,
    ConstraintSet,
    DomainMismatchError,
    DomainSpec,
    FunctionClass,
    FunctionTable,
    Relation,
    constraint_universe_count,
    enumerate_functions,
    function_count,
    projection,
    tuple_unrank,
)


@dataclass(frozen=True)
class GaloisQuery:
    """One direction of the correspondence at a fixed arity or cap."""

    side: str  # "functions_from_constraints" | "constraints_from_functions"
    arity_selector: int
    budget: int = DEFAULT_ENUMERATION_BUDGET

    def __post_init__(self) -> None:
        if self.side not in ("functions_from_constraints", "constraints_from_functions"):
            raise ValueError(f"unknown side {self.side!r}")
        if self.arity_selector < 1:
            raise ValueError("arity selector must be >= 1")


def image(f: FunctionTable, r: Relation) -> Relation:
    """The coordinatewise image of R under f: {f(a1..an) : a1..an in R}."""
    if f.dom != r.domain:
        raise DomainMismatchError(f"function on {f.dom.name!r} applied to relation over {r.domain.name!r}")
    rows = r.tuples()
    out_bits = 0
    cod_size = f.cod.size
    for choice in itertools.product(rows, repeat=f.arity):
        out = f.apply_pointwise(choice)
        rank = 0
        for v in out:
            rank = rank * cod_size + v
        out_bits |= 1 << rank
    return Relation(f.cod, r.arity, out_bits)


def satisfies(f: FunctionTable, c: Constraint) -> bool:
    """True iff the image of the antecedent under f lies inside the consequent.

    Iterates row choices drawn from the antecedent only, short-circuiting on
    the first violation.
    """
    if f.dom != c.dom or f.cod != c.cod:
        raise DomainMismatchError(
            f"function {f.dom.name!r}->{f.cod.name!r} against constraint "
            f"{c.dom.name!r}-to-{c.cod.name!r}"
        )
    rows = c.antecedent.tuples()
    cons = c.consequent
    cod_size = f.cod.size
    for choice in itertools.product(rows, repeat=f.arity):
        out = f.apply_pointwise(choice)
        rank = 0
        for v in out:
            rank = rank * cod_size + v
        if not (cons.bits >> rank) & 1:
            return False
    return True


def preserves(f: FunctionTable, r: Relation) -> bool:
    """The A=B specialization: f preserves R iff f satisfies (R, R)."""
    if f.dom != f.cod:
        raise DomainMismatchError("preservation needs dom = cod")
    return satisfies(f, Constraint(r, r))


def compose_classes(outer: FunctionClass, inner: FunctionClass, cap: int) -> FunctionClass:
    """All f(g1..gn) with f in outer and g1..gn same-arity members of inner."""
    if inner.cod != outer.dom:
        raise DomainMismatchError(
            f"inner codomain {inner.cod.name!r} does not match outer domain {outer.dom.name!r}"
        )
    if cap < 1:
        raise ValueError("cap must be >= 1")
    dom = inner.dom
    result: set[FunctionTable] = set()
    for n in outer.arities():
        for f in outer.members(n):
            for m in inner.arities():
                if m > cap:
                    continue
                inner_m = sorted(inner.members(m), key=lambda g: g.table)
                for gs in itertools.product(inner_m, repeat=n):
                    table = tuple(
                        f.table[_args_rank([g.table[r] for g in gs], outer.dom.size)]
                        for r in range(dom.size**m)
                    )
                    result.add(FunctionTable(dom, f.cod, m, table))
    return FunctionClass.from_tables(dom, outer.cod, result)


def _args_rank(args: list[int], size: int) -> int:
    rank = 0
    for a in args:
        rank = rank * size + a
    return rank


def projections_class(dom: DomainSpec, cap: int) -> FunctionClass:
    """The projection clone over dom, materialized at arities 1..cap."""
    return FunctionClass.from_tables(
        dom, dom, (projection(dom, n, i) for n in range(1, cap + 1) for i in range(1, n + 1))
    )


@lru_cache(maxsize=32)
def _all_tables(dom: DomainSpec, cod: DomainSpec, n: int, budget: int) -> tuple[FunctionTable, ...]:
    return tuple(enumerate_functions(dom, cod, n, budget))


def _constraint_plan(c: Constraint, n: int) -> tuple[list[tuple[int, ...]], int]:
    """Distinct evaluation signatures of an n-ary function against c.

    Each signature is the m argument-point ranks produced by one choice of n
    antecedent rows; a function satisfies c iff every signature's output tuple
    lands in the consequent.
    """
    size = c.dom.size
    rows = c.antecedent.tuples()
    m = c.arity
    seen: set[tuple[int, ...]] = set()
    for choice in itertools.product(rows, repeat=n):
        sig = []
        for i in range(m):
            r = 0
            for row in choice:
                r = r * size + row[i]
            sig.append(r)
        seen.add(tuple(sig))
    return sorted(seen), c.consequent.bits


def fsc_n(
    t: ConstraintSet,
    n: int,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> FunctionClass:
    """All n-ary functions satisfying every member of t."""
    count = function_count(t.dom, t.cod, n)
    if count > budget:
        raise BudgetExceededError(
            f"fsc_{n} needs {count} candidate functions, exceeding budget {budget}", count
        )
    plans = [_constraint_plan(c, n) for c in t.constraints()]
    cod_size = t.cod.size
    kept = []
    for f in _all_tables(t.dom, t.cod, n, budget):
        table = f.table
        ok = True
        for sigs, cons_bits in plans:
            for sig in sigs:
                rank = 0
                for q in sig:
                    rank = rank * cod_size + table[q]
                if not (cons_bits >> rank) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            kept.append(f)
    return FunctionClass.from_tables(t.dom, t.cod, kept)


def fsc(t: ConstraintSet, cap: int, budget: int = DEFAULT_ENUMERATION_BUDGET) -> FunctionClass:
    """Union of fsc_n over n = 1..cap."""
    out = FunctionClass.empty(t.dom, t.cod)
    for n in range(1, cap + 1):
        out = out | fsc_n(t, n, budget)
    return out


def _class_output_masks(k: FunctionClass, m: int) -> dict[int, list[int]]:
    """Per arity n, the achievable output-tuple masks for every m-point probe.

    Entry ``q`` of the arity-n list is a bitmask over cod^m ranks: the value
    tuples some member of the class takes at the m argument points encoded in
    the probe rank ``q`` (base |A|^n digits, first point most significant).
    Saturation per probe is detected early so large classes stay cheap.
    """
    cod_size = k.cod.size
    out: dict[int, list[int]] = {}
    for n in k.arities():
        points = k.dom.size**n
        n_probes = points**m
        masks = [0] * n_probes
        # max distinct value tuples at a probe = |B| ** (number of distinct points)
        limits = []
        for q in range(n_probes):
            probe = tuple_unrank(q, points, m)
            limits.append(cod_size ** len(set(probe)))
        probes = [tuple_unrank(q, points, m) for q in range(n_probes)]
        active = list(range(n_probes))
        members = sorted(k.members(n), key=lambda f: f.table)
        for f in members:
            if not active:
                break
            table = f.table
            still = []
            for q in active:
                rank = 0
                for p in probes[q]:
                    rank = rank * cod_size + table[p]
                masks[q] |= 1 << rank
                if masks[q].bit_count() < limits[q]:
                    still.append(q)
            active = still
        out[n] = masks
    return out


def csf_m(
    k: FunctionClass,
    m: int,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    candidates: ConstraintSet | None = None,
) -> ConstraintSet:
    """All m-ary constraints satisfied by every member of k.

    Without an explicit candidate set the full constraint universe is scanned,
    which requires 2^(|A|^m) * 2^(|B|^m) to fit the budget.
    """
    if candidates is not None:
        kept = [
            c
            for c in candidates.members(m)
            if all(satisfies(f, c) for f in k.tables())
        ]
        return ConstraintSet.from_constraints(k.dom, k.cod, kept)
    count = constraint_universe_count(k.dom, k.cod, m)
    if count > budget:
        raise BudgetExceededError(
            f"csf_{m} universe has {count} constraints, exceeding budget {budget}; "
            "supply an explicit candidate set",
            count,
        )
    dom, cod = k.dom, k.cod
    n_ante = dom.size**m
    n_cons_ranks = cod.size**m
    masks_by_arity = _class_output_masks(k, m)
    # per arity, each probe's cross-rows: row j reads coordinate j of every
    # probe point; the probe is reachable from an antecedent iff all its
    # cross-rows belong to it
    rows_by_arity: dict[int, list[tuple[int, list[int]]]] = {}
    for n, masks in masks_by_arity.items():
        points = dom.size**n
        plan = []
        for q, mask in enumerate(masks):
            probe = tuple_unrank(q, points, m)
            cols = [tuple_unrank(p, dom.size, n) for p in probe]
            row_ranks = []
            for j in range(n):
                rr = 0
                for col in cols:
                    rr = rr * dom.size + col[j]
                row_ranks.append(rr)
            plan.append((mask, row_ranks))
        rows_by_arity[n] = plan
    kept = []
    full_cons = (1 << n_cons_ranks) - 1
    for r_bits in range(1 << n_ante):
        needed = 0
        for plan in rows_by_arity.values():
            for mask, row_ranks in plan:
                if all((r_bits >> rr) & 1 for rr in row_ranks):
                    needed |= mask
            if needed == full_cons:
                break
        for s_bits in range(1 << n_cons_ranks):
            if needed & ~s_bits == 0:
                kept.append(
                    Constraint(Relation(dom, m, r_bits), Relation(cod, m, s_bits))
                )
    return ConstraintSet.from_constraints(dom, cod, kept)


def csf(k: FunctionClass, cap: int, budget: int = DEFAULT_ENUMERATION_BUDGET) -> ConstraintSet:
    """Union of csf_m over m = 1..cap."""
    out = ConstraintSet.empty(k.dom, k.cod)
    for m in range(1, cap + 1):
        out = out | csf_m(k, m, budget)
    return out


def trace_constraint(
    k: FunctionClass, columns: list[tuple[int, ...]], arity: int | None = None
) -> Constraint:
    """The separating constraint for n chosen columns a1..an in A^m.

    Antecedent {a1..an}; consequent = the values of the arity-n part of the
    class applied to the columns as a matrix.
    """
    if not columns:
        raise ValueError("need at least one column")
    m = len(columns[0])
    if any(len(c) != m for c in columns):
        raise ArityMismatchError("columns must share one arity")
    n = len(columns) if arity is None else arity
    if arity is not None and arity != len(columns):
        raise ArityMismatchError(f"{len(columns)} columns for arity {arity}")
    ante = Relation.from_tuples(k.dom, m, columns)
    cons_bits = 0
    cod_size = k.cod.size
    for f in k.members(n):
        out = f.apply_pointwise(columns)
        rank = 0
        for v in out:
            rank = rank * cod_size + v
        cons_bits |= 1 << rank
    return Constraint(ante, Relation(k.cod, m, cons_bits))


def minimal_consequent(k: FunctionClass, r: Relation) -> Relation:
    """The smallest consequent S making (R, S) satisfied by every member of k."""
    bits = 0
    for f in k.tables():
        bits |= image(f, r).bits
    return Relation(k.cod, r.arity, bits)
