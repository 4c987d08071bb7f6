"""Minor formation schemes and conjunctive-minor machinery.

A scheme assembles a target-arity relation from a family of source relations:
each source map reads its coordinates either from the target tuple or from a
shared pool of indeterminates, and membership in the tight minor is witnessed
by an exhaustive search over assignments of domain elements to the
indeterminates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .core import (
    ArityMismatchError,
    BudgetExceededError,
    Constraint,
    DomainSpec,
    Relation,
    relaxation_of,
    tuple_unrank,
)

DEFAULT_SKOLEM_BUDGET = 2

MODES = ("tight", "restrictive", "extensive", "conjunctive")


def coord(i: int) -> tuple[str, int]:
    """Scheme map entry reading target coordinate i (1-based)."""
    return ("c", i)


def indet(i: int) -> tuple[str, int]:
    """Scheme map entry reading indeterminate i (1-based)."""
    return ("v", i)


@dataclass(frozen=True)
class Scheme:
    """A minor formation scheme: target arity, indeterminate count, source maps.

    Map entries are encoded as ints: values below ``target`` are target
    coordinates, values from ``target`` upward are indeterminates.
    """

    target: int
    indets: int
    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "maps", tuple(tuple(h) for h in self.maps))
        if self.target < 1:
            raise ValueError("target arity must be >= 1")
        if self.indets < 0:
            raise ValueError("indeterminate count must be >= 0")
        if not self.maps:
            raise ValueError("scheme needs a nonempty family of maps")
        for h in self.maps:
            if not h:
                raise ValueError("source arities must be >= 1")
            for e in h:
                if not 0 <= e < self.target + self.indets:
                    raise ValueError(f"map entry {e} out of range for target {self.target}, V={self.indets}")

    @classmethod
    def of(cls, target: int, indets: int, maps: Sequence[Sequence[tuple[str, int]]]) -> "Scheme":
        """Build from tagged entries produced by coord()/indet()."""
        encoded = []
        for h in maps:
            row = []
            for kind, i in h:
                if kind == "c":
                    if not 1 <= i <= target:
                        raise ValueError(f"coordinate {i} out of range 1..{target}")
                    row.append(i - 1)
                elif kind == "v":
                    if not 1 <= i <= indets:
                        raise ValueError(f"indeterminate {i} out of range 1..{indets}")
                    row.append(target + i - 1)
                else:
                    raise ValueError(f"unknown entry kind {kind!r}")
            encoded.append(tuple(row))
        return cls(target, indets, tuple(encoded))

    def source_arities(self) -> tuple[int, ...]:
        return tuple(len(h) for h in self.maps)

    def normalized(self) -> "Scheme":
        """Drop unused indeterminates, renumbering the rest in order."""
        used = sorted({e for h in self.maps for e in h if e >= self.target})
        if len(used) == self.indets:
            return self
        remap = {e: self.target + i for i, e in enumerate(used)}
        maps = tuple(tuple(e if e < self.target else remap[e] for e in h) for h in self.maps)
        return Scheme(self.target, len(used), maps)


def identity_scheme(m: int, source_count: int = 1) -> Scheme:
    """source_count identity maps m -> m with no indeterminates."""
    return Scheme(m, 0, tuple(tuple(range(m)) for _ in range(source_count)))


def tight_minor_relation(
    relations: Sequence[Relation],
    scheme: Scheme,
    domain: DomainSpec | None = None,
    max_indets: int = DEFAULT_SKOLEM_BUDGET,
) -> Relation:
    """The tight conjunctive minor of a relation family via the scheme.

    A target tuple belongs iff some assignment of domain elements to the
    indeterminates puts every source map's reading inside its relation.
    """
    scheme = scheme.normalized()
    if scheme.indets > max_indets:
        raise BudgetExceededError(
            f"scheme uses {scheme.indets} indeterminates, budget is {max_indets}",
            scheme.indets,
        )
    if len(relations) != len(scheme.maps):
        raise ArityMismatchError(
            f"{len(relations)} relations for {len(scheme.maps)} scheme maps"
        )
    for r, h in zip(relations, scheme.maps):
        if r.arity != len(h):
            raise ArityMismatchError(f"relation arity {r.arity} != map source arity {len(h)}")
    if domain is None:
        domain = relations[0].domain
    for r in relations:
        if r.domain != domain:
            raise ArityMismatchError(f"relation over {r.domain.name!r}, expected {domain.name!r}")
    m = scheme.target
    size = domain.size
    # identical (relation, map) pairs contribute one condition
    pairs = sorted({(r.bits, h) for r, h in zip(relations, scheme.maps)})
    sigmas = list(itertools.product(range(size), repeat=scheme.indets))
    bits = 0
    for rank in range(size**m):
        a = tuple_unrank(rank, size, m)
        for sigma in sigmas:
            ok = True
            for r_bits, h in pairs:
                rr = 0
                for e in h:
                    rr = rr * size + (a[e] if e < m else sigma[e - m])
                if not (r_bits >> rr) & 1:
                    ok = False
                    break
            if ok:
                bits |= 1 << rank
                break
    return Relation(domain, m, bits)


def tight_minor(
    family: Sequence[Constraint],
    scheme: Scheme,
    max_indets: int = DEFAULT_SKOLEM_BUDGET,
) -> Constraint:
    """Tight minor of a constraint family: both sides via the same scheme."""
    if not family:
        raise ValueError("family must be nonempty")
    ante = tight_minor_relation([c.antecedent for c in family], scheme, family[0].dom, max_indets)
    cons = tight_minor_relation([c.consequent for c in family], scheme, family[0].cod, max_indets)
    return Constraint(ante, cons)


def minor_check(
    candidate: Constraint,
    family: Sequence[Constraint],
    scheme: Scheme,
    mode: str,
    max_indets: int = DEFAULT_SKOLEM_BUDGET,
) -> bool:
    """Whether the candidate is a minor of the family in the given mode.

    tight: exact equality with the tight minor; restrictive: antecedent
    contained in the tight antecedent; extensive: consequent containing the
    tight consequent; conjunctive: both, i.e. a relaxation of the tight minor.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if candidate.arity != scheme.target:
        raise ArityMismatchError(f"candidate arity {candidate.arity} != scheme target {scheme.target}")
    tm = tight_minor(family, scheme, max_indets)
    if mode == "tight":
        return candidate == tm
    if mode == "restrictive":
        return candidate.antecedent.issubset(tm.antecedent)
    if mode == "extensive":
        return tm.consequent.issubset(candidate.consequent)
    return relaxation_of(candidate, tm)


def special_minor(
    c0: Constraint,
    scheme: Scheme,
    max_indets: int = DEFAULT_SKOLEM_BUDGET,
) -> tuple[Constraint, frozenset[str]]:
    """Tight minor of a single constraint, tagged simple and/or weak."""
    flags = set()
    if len(scheme.maps) == 1:
        flags.add("simple")
    if scheme.normalized().indets == 0:
        flags.add("weak")
    if not flags:
        raise ValueError("scheme is neither single-source nor indeterminate-free")
    family = [c0] * len(scheme.maps)
    return tight_minor(family, scheme, max_indets), frozenset(flags)


def compose_schemes(outer: Scheme, inner_schemes: Sequence[Scheme]) -> Scheme:
    """Flatten a two-level scheme stack into one scheme.

    The tight minor of the flattened family equals the tight minor of the
    outer scheme applied to the tight minors of the inner ones; the inner
    indeterminate pools are renamed apart so the combined Skolem search
    ranges over all of them jointly.
    """
    if len(inner_schemes) != len(outer.maps):
        raise ArityMismatchError(
            f"{len(inner_schemes)} inner schemes for {len(outer.maps)} outer maps"
        )
    for h, inner in zip(outer.maps, inner_schemes):
        if inner.target != len(h):
            raise ArityMismatchError(
                f"inner target {inner.target} != outer source arity {len(h)}"
            )
    m = outer.target
    total_indets = outer.indets + sum(s.indets for s in inner_schemes)
    maps: list[tuple[int, ...]] = []
    offset = outer.indets
    for h, inner in zip(outer.maps, inner_schemes):
        for g in inner.maps:
            row = []
            for e in g:
                if e < inner.target:
                    v = h[e]
                    # outer entries keep coordinates; outer indets shift past m
                    row.append(v if v < outer.target else m + (v - outer.target))
                else:
                    row.append(m + offset + (e - inner.target))
            maps.append(tuple(row))
        offset += inner.indets
    return Scheme(m, total_indets, tuple(maps)).normalized()
