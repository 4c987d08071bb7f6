"""Value-level vocabulary: domains, tuples, function tables, relations,
constraints, and arity-indexed collections of them.

Elements of a finite domain are integer indices 0..size-1.  Tuples over a
domain are addressed by their lexicographic rank (first coordinate most
significant), and relations are stored as bit-addressable sets over those
ranks, so subset/intersection/union are single word operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_ENUMERATION_BUDGET = 1_000_000


class ArityMismatchError(ValueError):
    pass


class DomainMismatchError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    """Raised instead of silently attempting a doubly exponential enumeration."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


@dataclass(frozen=True, order=True)
class DomainSpec:
    """A named finite set, identified with {0, ..., size-1}."""

    name: str
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"domain {self.name!r} must have size >= 1, got {self.size}")

    def elements(self) -> range:
        return range(self.size)


def tuple_rank(entries: Sequence[int], size: int) -> int:
    """Lexicographic rank of a tuple, first coordinate most significant."""
    rank = 0
    for e in entries:
        if not 0 <= e < size:
            raise ValueError(f"entry {e} out of range for domain of size {size}")
        rank = rank * size + e
    return rank


def tuple_unrank(rank: int, size: int, arity: int) -> tuple[int, ...]:
    """Inverse of tuple_rank at the given arity."""
    if not 0 <= rank < size**arity:
        raise ValueError(f"rank {rank} out of range for size {size}, arity {arity}")
    out = [0] * arity
    for i in range(arity - 1, -1, -1):
        rank, out[i] = divmod(rank, size)
    return tuple(out)


@dataclass(frozen=True)
class TupleM:
    """An m-tuple over a finite domain."""

    domain: DomainSpec
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        if len(self.entries) < 1:
            raise ValueError("tuples have positive arity")
        for e in self.entries:
            if not 0 <= e < self.domain.size:
                raise ValueError(f"entry {e} out of range for domain {self.domain.name!r}")

    @property
    def arity(self) -> int:
        return len(self.entries)

    def rank(self) -> int:
        return tuple_rank(self.entries, self.domain.size)

    @classmethod
    def unrank(cls, rank: int, domain: DomainSpec, arity: int) -> "TupleM":
        return cls(domain, tuple_unrank(rank, domain.size, arity))


@dataclass(frozen=True, order=True)
class FunctionTable:
    """An n-ary cod-valued function on dom, as an explicit value table.

    ``table[r]`` is the value at the argument tuple of rank ``r``; the table
    therefore has exactly ``dom.size ** arity`` entries.
    """

    dom: DomainSpec
    cod: DomainSpec
    arity: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(self.table))
        if self.arity < 1:
            raise ValueError("function arity must be >= 1")
        expected = self.dom.size**self.arity
        if len(self.table) != expected:
            raise ValueError(
                f"table has {len(self.table)} entries, expected {expected} "
                f"for arity {self.arity} over domain of size {self.dom.size}"
            )
        for v in self.table:
            if not 0 <= v < self.cod.size:
                raise ValueError(f"table value {v} out of range for codomain {self.cod.name!r}")

    def __call__(self, args: Sequence[int]) -> int:
        if len(args) != self.arity:
            raise ArityMismatchError(f"expected {self.arity} arguments, got {len(args)}")
        return self.table[tuple_rank(args, self.dom.size)]

    def rank(self) -> int:
        """Rank of the table itself, read as base-|cod| digits."""
        return tuple_rank(self.table, self.cod.size)

    def apply_pointwise(self, rows: Sequence[tuple[int, ...]]) -> tuple[int, ...]:
        """Apply to n chosen m-tuples coordinatewise: out_i = f(rows[0][i], ..)."""
        if len(rows) != self.arity:
            raise ArityMismatchError(f"expected {self.arity} rows, got {len(rows)}")
        size = self.dom.size
        table = self.table
        out = []
        for i in range(len(rows[0])):
            r = 0
            for row in rows:
                r = r * size + row[i]
            out.append(table[r])
        return tuple(out)


@dataclass(frozen=True)
class Relation:
    """An m-ary relation over a finite domain, stored as a bitmask of ranks."""

    domain: DomainSpec
    arity: int
    bits: int

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("relation arity must be >= 1")
        if self.bits < 0 or self.bits >> self.universe_size:
            raise ValueError("relation bitmask has members outside the universe")

    @property
    def universe_size(self) -> int:
        return self.domain.size**self.arity

    @classmethod
    def from_tuples(cls, domain: DomainSpec, arity: int, tuples: Iterable[Sequence[int]]) -> "Relation":
        bits = 0
        for t in tuples:
            if len(t) != arity:
                raise ArityMismatchError(f"tuple {tuple(t)} does not have arity {arity}")
            bits |= 1 << tuple_rank(t, domain.size)
        return cls(domain, arity, bits)

    @classmethod
    def from_ranks(cls, domain: DomainSpec, arity: int, ranks: Iterable[int]) -> "Relation":
        bits = 0
        limit = domain.size**arity
        for r in ranks:
            if not 0 <= r < limit:
                raise ValueError(f"rank {r} out of range for {domain.name!r}^{arity}")
            bits |= 1 << r
        return cls(domain, arity, bits)

    @classmethod
    def empty(cls, domain: DomainSpec, arity: int) -> "Relation":
        return cls(domain, arity, 0)

    @classmethod
    def full(cls, domain: DomainSpec, arity: int) -> "Relation":
        return cls(domain, arity, (1 << domain.size**arity) - 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def contains_rank(self, rank: int) -> bool:
        return (self.bits >> rank) & 1 == 1

    def contains_tuple(self, t: Sequence[int]) -> bool:
        return self.contains_rank(tuple_rank(t, self.domain.size))

    def member_ranks(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def tuples(self) -> list[tuple[int, ...]]:
        size = self.domain.size
        return [tuple_unrank(r, size, self.arity) for r in self.member_ranks()]

    def _check_compatible(self, other: "Relation") -> None:
        if self.domain != other.domain:
            raise DomainMismatchError(f"relations over {self.domain.name!r} and {other.domain.name!r}")
        if self.arity != other.arity:
            raise ArityMismatchError(f"relation arities {self.arity} and {other.arity} differ")

    def issubset(self, other: "Relation") -> bool:
        self._check_compatible(other)
        return self.bits & ~other.bits == 0

    def __le__(self, other: "Relation") -> bool:
        return self.issubset(other)

    def __or__(self, other: "Relation") -> "Relation":
        self._check_compatible(other)
        return Relation(self.domain, self.arity, self.bits | other.bits)

    def __and__(self, other: "Relation") -> "Relation":
        self._check_compatible(other)
        return Relation(self.domain, self.arity, self.bits & other.bits)


@dataclass(frozen=True)
class Constraint:
    """An antecedent relation over A paired with a consequent over B, equal arity."""

    antecedent: Relation
    consequent: Relation

    def __post_init__(self) -> None:
        if self.antecedent.arity != self.consequent.arity:
            raise ArityMismatchError(
                f"antecedent arity {self.antecedent.arity} != consequent arity {self.consequent.arity}"
            )

    @property
    def arity(self) -> int:
        return self.antecedent.arity

    @property
    def dom(self) -> DomainSpec:
        return self.antecedent.domain

    @property
    def cod(self) -> DomainSpec:
        return self.consequent.domain


def relaxation_of(c: Constraint, c0: Constraint) -> bool:
    """True iff c shrinks the antecedent and grows the consequent of c0."""
    if c.arity != c0.arity:
        raise ArityMismatchError(f"constraint arities {c.arity} and {c0.arity} differ")
    return c.antecedent.issubset(c0.antecedent) and c0.consequent.issubset(c.consequent)


def canonical_constraint(kind: str, m: int, dom: DomainSpec, cod: DomainSpec) -> Constraint:
    """The distinguished constraints: equality, empty, trivial, all at arity m."""
    if m < 1:
        raise ValueError("constraint arity must be >= 1")
    if kind == "equality":
        ante = Relation.from_tuples(dom, m, ((a,) * m for a in dom.elements()))
        cons = Relation.from_tuples(cod, m, ((b,) * m for b in cod.elements()))
        return Constraint(ante, cons)
    if kind == "empty":
        return Constraint(Relation.empty(dom, m), Relation.empty(cod, m))
    if kind == "trivial":
        return Constraint(Relation.full(dom, m), Relation.full(cod, m))
    raise ValueError(f"unknown canonical constraint kind {kind!r}")


def projection(dom: DomainSpec, n: int, i: int) -> FunctionTable:
    """The n-ary projection onto coordinate i (1-based) over dom."""
    if not 1 <= i <= n:
        raise ValueError(f"projection coordinate {i} out of range 1..{n}")
    size = dom.size
    table = [0] * size**n
    for rank in range(size**n):
        table[rank] = tuple_unrank(rank, size, n)[i - 1]
    return FunctionTable(dom, dom, n, tuple(table))


def enumerate_functions(
    dom: DomainSpec,
    cod: DomainSpec,
    n: int,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> Iterator[FunctionTable]:
    """All n-ary cod-valued functions on dom, in table-rank order."""
    if n < 1:
        raise ValueError("function arity must be >= 1")
    count = cod.size ** (dom.size**n)
    if count > budget:
        raise BudgetExceededError(
            f"enumerating {count} functions of arity {n} exceeds budget {budget}", count
        )
    for table in itertools.product(range(cod.size), repeat=dom.size**n):
        yield FunctionTable(dom, cod, n, table)


def function_count(dom: DomainSpec, cod: DomainSpec, n: int) -> int:
    return cod.size ** (dom.size**n)


def _normalized_by_arity(by_arity: Mapping[int, Iterable], cap: int | None) -> dict:
    out: dict[int, frozenset] = {}
    for arity, members in by_arity.items():
        members = frozenset(members)
        if not members:
            continue
        if cap is not None and arity > cap:
            raise ValueError(f"arity {arity} exceeds declared cap {cap}")
        out[arity] = members
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class FunctionClass:
    """An arity-indexed collection of function tables with common dom and cod."""

    dom: DomainSpec
    cod: DomainSpec
    by_arity: Mapping[int, frozenset[FunctionTable]]
    arity_cap: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        norm = _normalized_by_arity(self.by_arity, self.arity_cap)
        for arity, members in norm.items():
            for f in members:
                if f.dom != self.dom or f.cod != self.cod:
                    raise DomainMismatchError(f"function over {f.dom.name!r}->{f.cod.name!r} in class over {self.dom.name!r}->{self.cod.name!r}")
                if f.arity != arity:
                    raise ArityMismatchError(f"function of arity {f.arity} stored under arity {arity}")
        object.__setattr__(self, "by_arity", norm)

    @classmethod
    def from_tables(
        cls,
        dom: DomainSpec,
        cod: DomainSpec,
        tables: Iterable[FunctionTable],
        arity_cap: int | None = None,
    ) -> "FunctionClass":
        by_arity: dict[int, set[FunctionTable]] = {}
        for f in tables:
            by_arity.setdefault(f.arity, set()).add(f)
        return cls(dom, cod, {n: frozenset(s) for n, s in by_arity.items()}, arity_cap)

    @classmethod
    def empty(cls, dom: DomainSpec, cod: DomainSpec) -> "FunctionClass":
        return cls(dom, cod, {})

    def arities(self) -> tuple[int, ...]:
        return tuple(self.by_arity)

    def members(self, arity: int) -> frozenset[FunctionTable]:
        return self.by_arity.get(arity, frozenset())

    def tables(self) -> list[FunctionTable]:
        out: list[FunctionTable] = []
        for arity in sorted(self.by_arity):
            out.extend(sorted(self.by_arity[arity], key=lambda f: f.table))
        return out

    def __len__(self) -> int:
        return sum(len(s) for s in self.by_arity.values())

    def __contains__(self, f: FunctionTable) -> bool:
        return f in self.by_arity.get(f.arity, frozenset())

    def __or__(self, other: "FunctionClass") -> "FunctionClass":
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise DomainMismatchError("cannot union classes over different domains")
        merged = dict(self.by_arity)
        for arity, members in other.by_arity.items():
            merged[arity] = merged.get(arity, frozenset()) | members
        return FunctionClass(self.dom, self.cod, merged)

    def issubset(self, other: "FunctionClass") -> bool:
        return all(members <= other.members(arity) for arity, members in self.by_arity.items())

    def restrict_arity(self, arity: int) -> "FunctionClass":
        return FunctionClass(self.dom, self.cod, {arity: self.members(arity)})


@dataclass(frozen=True)
class ConstraintSet:
    """An arity-indexed collection of constraints over a common A and B."""

    dom: DomainSpec
    cod: DomainSpec
    by_arity: Mapping[int, frozenset[Constraint]]
    arity_cap: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        norm = _normalized_by_arity(self.by_arity, self.arity_cap)
        for arity, members in norm.items():
            for c in members:
                if c.dom != self.dom or c.cod != self.cod:
                    raise DomainMismatchError(f"constraint over {c.dom.name!r}->{c.cod.name!r} in set over {self.dom.name!r}->{self.cod.name!r}")
                if c.arity != arity:
                    raise ArityMismatchError(f"constraint of arity {c.arity} stored under arity {arity}")
        object.__setattr__(self, "by_arity", norm)

    @classmethod
    def from_constraints(
        cls,
        dom: DomainSpec,
        cod: DomainSpec,
        constraints: Iterable[Constraint],
        arity_cap: int | None = None,
    ) -> "ConstraintSet":
        by_arity: dict[int, set[Constraint]] = {}
        for c in constraints:
            by_arity.setdefault(c.arity, set()).add(c)
        return cls(dom, cod, {m: frozenset(s) for m, s in by_arity.items()}, arity_cap)

    @classmethod
    def empty(cls, dom: DomainSpec, cod: DomainSpec) -> "ConstraintSet":
        return cls(dom, cod, {})

    def arities(self) -> tuple[int, ...]:
        return tuple(self.by_arity)

    def members(self, arity: int) -> frozenset[Constraint]:
        return self.by_arity.get(arity, frozenset())

    def constraints(self) -> list[Constraint]:
        out: list[Constraint] = []
        for arity in sorted(self.by_arity):
            out.extend(
                sorted(self.by_arity[arity], key=lambda c: (c.antecedent.bits, c.consequent.bits))
            )
        return out

    def __len__(self) -> int:
        return sum(len(s) for s in self.by_arity.values())

    def __contains__(self, c: Constraint) -> bool:
        return c in self.by_arity.get(c.arity, frozenset())

    def __or__(self, other: "ConstraintSet") -> "ConstraintSet":
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise DomainMismatchError("cannot union sets over different domains")
        merged = dict(self.by_arity)
        for arity, members in other.by_arity.items():
            merged[arity] = merged.get(arity, frozenset()) | members
        return ConstraintSet(self.dom, self.cod, merged)

    def issubset(self, other: "ConstraintSet") -> bool:
        return all(members <= other.members(arity) for arity, members in self.by_arity.items())

    def restrict_arity(self, arity: int) -> "ConstraintSet":
        return ConstraintSet(self.dom, self.cod, {arity: self.members(arity)})


def constraint_universe_count(dom: DomainSpec, cod: DomainSpec, m: int) -> int:
    """Number of m-ary constraints: all (antecedent, consequent) pairs."""
    return 2 ** (dom.size**m) * 2 ** (cod.size**m)


def enumerate_constraints(
    dom: DomainSpec,
    cod: DomainSpec,
    m: int,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> Iterator[Constraint]:
    """All m-ary constraints, ordered by (antecedent, consequent) bitmask."""
    count = constraint_universe_count(dom, cod, m)
    if count > budget:
        raise BudgetExceededError(
            f"enumerating {count} constraints of arity {m} exceeds budget {budget}", count
        )
    for r_bits in range(2 ** (dom.size**m)):
        for s_bits in range(2 ** (cod.size**m)):
            yield Constraint(Relation(dom, m, r_bits), Relation(cod, m, s_bits))
