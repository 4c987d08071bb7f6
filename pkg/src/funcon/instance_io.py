"""Instance documents: a JSON surface grammar for domains, functions,
relations, constraints, classes, sets and schemes, with canonical
serialization and deterministic report formatting.

Canonicalization invariants: parsing a canonical document and serializing it
returns the same bytes; serializing any parsed document is idempotent.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .core import (
    Constraint,
    ConstraintSet,
    DomainSpec,
    FunctionClass,
    FunctionTable,
    Relation,
)
from .lab import ClosureReport
from .minors import Scheme


class InstanceParseError(ValueError):
    """Malformed document text; carries line/column when available."""


class InstanceSemanticError(ValueError):
    """Well-formed document with an invalid binding; names the binding."""


_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")


@dataclass
class InstanceDocument:
    """Named bindings parsed from one instance file."""

    domains: dict[str, DomainSpec] = field(default_factory=dict)
    functions: dict[str, FunctionTable] = field(default_factory=dict)
    relations: dict[str, Relation] = field(default_factory=dict)
    constraints: dict[str, Constraint] = field(default_factory=dict)
    classes: dict[str, FunctionClass] = field(default_factory=dict)
    sets: dict[str, ConstraintSet] = field(default_factory=dict)
    schemes: dict[str, Scheme] = field(default_factory=dict)
    # reverse maps used for canonical serialization
    _constraint_parts: dict[str, tuple[str, str]] = field(default_factory=dict)
    _class_members: dict[str, tuple[str, str, tuple[str, ...]]] = field(default_factory=dict)
    _set_members: dict[str, tuple[str, str, tuple[str, ...]]] = field(default_factory=dict)

    def _lookup(self, table: dict, name: str, kind: str):
        if name not in table:
            raise InstanceSemanticError(f"{kind} {name!r} is not defined")
        return table[name]

    def domain(self, name: str) -> DomainSpec:
        return self._lookup(self.domains, name, "domain")

    def function(self, name: str) -> FunctionTable:
        return self._lookup(self.functions, name, "function")

    def relation(self, name: str) -> Relation:
        return self._lookup(self.relations, name, "relation")

    def constraint(self, name: str) -> Constraint:
        return self._lookup(self.constraints, name, "constraint")

    def function_class(self, name: str) -> FunctionClass:
        return self._lookup(self.classes, name, "class")

    def constraint_set(self, name: str) -> ConstraintSet:
        return self._lookup(self.sets, name, "set")

    def scheme(self, name: str) -> Scheme:
        return self._lookup(self.schemes, name, "scheme")


def _require(cond: bool, binding: str, message: str) -> None:
    if not cond:
        raise InstanceSemanticError(f"{binding}: {message}")


def _check_name(name: str, section: str) -> None:
    if not isinstance(name, str) or not _NAME.match(name):
        raise InstanceSemanticError(f"{section}: invalid binding name {name!r}")


def parse_scheme_literal(text: str, binding: str = "scheme") -> Scheme:
    """Parse 'target=2; V=1; h1=[c1,v1]; h2=[v1,c2]' into a Scheme.

    Entries c<i> read target coordinate i, entries v<i> read indeterminate i,
    both 1-based; maps must be named h1..hk consecutively.
    """
    parts = [p.strip() for p in text.split(";") if p.strip()]
    fields: dict[str, str] = {}
    for part in parts:
        if "=" not in part:
            raise InstanceSemanticError(f"{binding}: expected key=value, got {part!r}")
        key, _, value = part.partition("=")
        key = key.strip()
        if key in fields:
            raise InstanceSemanticError(f"{binding}: duplicate key {key!r}")
        fields[key] = value.strip()
    for needed in ("target", "V"):
        if needed not in fields:
            raise InstanceSemanticError(f"{binding}: missing {needed!r}")
    try:
        target = int(fields.pop("target"))
        indets = int(fields.pop("V"))
    except ValueError as exc:
        raise InstanceSemanticError(f"{binding}: target and V must be integers") from exc
    maps = []
    for i in range(1, len(fields) + 1):
        key = f"h{i}"
        if key not in fields:
            raise InstanceSemanticError(
                f"{binding}: maps must be named h1..h{len(fields)}, missing {key!r}"
            )
        value = fields[key]
        if not (value.startswith("[") and value.endswith("]")):
            raise InstanceSemanticError(f"{binding}: {key} must be a [..] entry list")
        row = []
        for entry in value[1:-1].split(","):
            entry = entry.strip()
            m = re.fullmatch(r"([cv])(\d+)", entry)
            if not m:
                raise InstanceSemanticError(
                    f"{binding}: {key} entry {entry!r} is not c<i> or v<i>"
                )
            kind, idx = m.group(1), int(m.group(2))
            bound = target if kind == "c" else indets
            _require(1 <= idx <= bound, binding, f"{key} entry {entry!r} out of range 1..{bound}")
            row.append(idx - 1 if kind == "c" else target + idx - 1)
        _require(bool(row), binding, f"{key} must be nonempty")
        maps.append(tuple(row))
    _require(bool(maps), binding, "scheme needs at least one map h1")
    try:
        return Scheme(target, indets, tuple(maps))
    except ValueError as exc:
        raise InstanceSemanticError(f"{binding}: {exc}") from exc


def scheme_literal(s: Scheme) -> str:
    parts = [f"target={s.target}", f"V={s.indets}"]
    for i, h in enumerate(s.maps, start=1):
        entries = ",".join(
            f"c{e + 1}" if e < s.target else f"v{e - s.target + 1}" for e in h
        )
        parts.append(f"h{i}=[{entries}]")
    return "; ".join(parts)


def _as_dict(value, binding: str) -> dict:
    _require(isinstance(value, dict), binding, f"expected an object, got {type(value).__name__}")
    return value


def _only_keys(obj: dict, allowed: set[str], binding: str) -> None:
    extra = set(obj) - allowed
    _require(not extra, binding, f"unknown keys {sorted(extra)}")


def parse_instance(text: str) -> InstanceDocument:
    """Parse and fully validate an instance document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(
            f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise InstanceParseError("document root must be a JSON object")
    known = {"domains", "functions", "relations", "constraints", "classes", "sets", "schemes"}
    extra = set(raw) - known
    if extra:
        raise InstanceSemanticError(f"document: unknown sections {sorted(extra)}")
    doc = InstanceDocument()

    for name, size in _as_dict(raw.get("domains", {}), "domains").items():
        _check_name(name, "domains")
        binding = f"domain {name!r}"
        _require(isinstance(size, int) and size >= 1, binding, f"size must be a positive integer, got {size!r}")
        doc.domains[name] = DomainSpec(name, size)

    for name, spec in _as_dict(raw.get("functions", {}), "functions").items():
        _check_name(name, "functions")
        binding = f"function {name!r}"
        spec = _as_dict(spec, binding)
        _only_keys(spec, {"dom", "cod", "arity", "table"}, binding)
        for key in ("dom", "cod", "arity", "table"):
            _require(key in spec, binding, f"missing {key!r}")
        dom = doc.domain(spec["dom"])
        cod = doc.domain(spec["cod"])
        arity, table = spec["arity"], spec["table"]
        _require(isinstance(arity, int) and arity >= 1, binding, "arity must be a positive integer")
        _require(isinstance(table, list), binding, "table must be an array")
        expected = dom.size**arity
        _require(
            len(table) == expected, binding, f"expected {expected} entries, got {len(table)}"
        )
        for v in table:
            _require(
                isinstance(v, int) and 0 <= v < cod.size,
                binding,
                f"table value {v!r} out of range 0..{cod.size - 1}",
            )
        doc.functions[name] = FunctionTable(dom, cod, arity, tuple(table))

    for name, spec in _as_dict(raw.get("relations", {}), "relations").items():
        _check_name(name, "relations")
        binding = f"relation {name!r}"
        spec = _as_dict(spec, binding)
        _only_keys(spec, {"domain", "arity", "tuples"}, binding)
        for key in ("domain", "arity", "tuples"):
            _require(key in spec, binding, f"missing {key!r}")
        dom = doc.domain(spec["domain"])
        arity, tuples = spec["arity"], spec["tuples"]
        _require(isinstance(arity, int) and arity >= 1, binding, "arity must be a positive integer")
        _require(isinstance(tuples, list), binding, "tuples must be an array of arrays")
        for t in tuples:
            _require(
                isinstance(t, list) and len(t) == arity,
                binding,
                f"tuple {t!r} does not have arity {arity}",
            )
            for e in t:
                _require(
                    isinstance(e, int) and 0 <= e < dom.size,
                    binding,
                    f"element {e!r} out of range 0..{dom.size - 1}",
                )
        doc.relations[name] = Relation.from_tuples(dom, arity, [tuple(t) for t in tuples])

    for name, spec in _as_dict(raw.get("constraints", {}), "constraints").items():
        _check_name(name, "constraints")
        binding = f"constraint {name!r}"
        spec = _as_dict(spec, binding)
        _only_keys(spec, {"antecedent", "consequent"}, binding)
        for key in ("antecedent", "consequent"):
            _require(key in spec, binding, f"missing {key!r}")
        ante = doc.relation(spec["antecedent"])
        cons = doc.relation(spec["consequent"])
        _require(
            ante.arity == cons.arity,
            binding,
            f"antecedent arity {ante.arity} != consequent arity {cons.arity}",
        )
        doc.constraints[name] = Constraint(ante, cons)
        doc._constraint_parts[name] = (spec["antecedent"], spec["consequent"])

    for name, spec in _as_dict(raw.get("classes", {}), "classes").items():
        _check_name(name, "classes")
        binding = f"class {name!r}"
        spec = _as_dict(spec, binding)
        _only_keys(spec, {"dom", "cod", "members"}, binding)
        for key in ("dom", "cod", "members"):
            _require(key in spec, binding, f"missing {key!r}")
        dom = doc.domain(spec["dom"])
        cod = doc.domain(spec["cod"])
        members = spec["members"]
        _require(isinstance(members, list), binding, "members must be an array of function names")
        tables = []
        for fname in members:
            f = doc.function(fname)
            _require(
                f.dom == dom and f.cod == cod,
                binding,
                f"member {fname!r} is over {f.dom.name!r}->{f.cod.name!r}, "
                f"class is over {dom.name!r}->{cod.name!r}",
            )
            tables.append(f)
        doc.classes[name] = FunctionClass.from_tables(dom, cod, tables)
        doc._class_members[name] = (spec["dom"], spec["cod"], tuple(sorted(members)))

    for name, spec in _as_dict(raw.get("sets", {}), "sets").items():
        _check_name(name, "sets")
        binding = f"set {name!r}"
        spec = _as_dict(spec, binding)
        _only_keys(spec, {"dom", "cod", "members"}, binding)
        for key in ("dom", "cod", "members"):
            _require(key in spec, binding, f"missing {key!r}")
        dom = doc.domain(spec["dom"])
        cod = doc.domain(spec["cod"])
        members = spec["members"]
        _require(isinstance(members, list), binding, "members must be an array of constraint names")
        cs = []
        for cname in members:
            c = doc.constraint(cname)
            _require(
                c.dom == dom and c.cod == cod,
                binding,
                f"member {cname!r} is over {c.dom.name!r}-to-{c.cod.name!r}, "
                f"set is over {dom.name!r}-to-{cod.name!r}",
            )
            cs.append(c)
        doc.sets[name] = ConstraintSet.from_constraints(dom, cod, cs)
        doc._set_members[name] = (spec["dom"], spec["cod"], tuple(sorted(members)))

    for name, literal in _as_dict(raw.get("schemes", {}), "schemes").items():
        _check_name(name, "schemes")
        _require(isinstance(literal, str), f"scheme {name!r}", "scheme literal must be a string")
        doc.schemes[name] = parse_scheme_literal(literal, f"scheme {name!r}")

    return doc


def serialize_instance(doc: InstanceDocument) -> str:
    """Canonical text of a document: sorted names, sorted tuples and members."""
    out: dict = {}
    if doc.domains:
        out["domains"] = {name: doc.domains[name].size for name in sorted(doc.domains)}
    if doc.functions:
        out["functions"] = {
            name: {
                "dom": f.dom.name,
                "cod": f.cod.name,
                "arity": f.arity,
                "table": list(f.table),
            }
            for name, f in sorted(doc.functions.items())
        }
    if doc.relations:
        out["relations"] = {
            name: {
                "domain": r.domain.name,
                "arity": r.arity,
                "tuples": [list(t) for t in sorted(r.tuples())],
            }
            for name, r in sorted(doc.relations.items())
        }
    if doc.constraints:
        out["constraints"] = {
            name: {
                "antecedent": doc._constraint_parts[name][0],
                "consequent": doc._constraint_parts[name][1],
            }
            for name in sorted(doc.constraints)
        }
    if doc.classes:
        out["classes"] = {
            name: {
                "dom": doc._class_members[name][0],
                "cod": doc._class_members[name][1],
                "members": list(doc._class_members[name][2]),
            }
            for name in sorted(doc.classes)
        }
    if doc.sets:
        out["sets"] = {
            name: {
                "dom": doc._set_members[name][0],
                "cod": doc._set_members[name][1],
                "members": list(doc._set_members[name][2]),
            }
            for name in sorted(doc.sets)
        }
    if doc.schemes:
        out["schemes"] = {name: scheme_literal(s) for name, s in sorted(doc.schemes.items())}
    return json.dumps(out, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# canonical result listings


def function_record(f: FunctionTable) -> dict:
    return {"arity": f.arity, "table": list(f.table)}


def constraint_record(c: Constraint) -> dict:
    return {
        "arity": c.arity,
        "antecedent": [list(t) for t in sorted(c.antecedent.tuples())],
        "consequent": [list(t) for t in sorted(c.consequent.tuples())],
    }


def class_listing(k: FunctionClass) -> str:
    records = [function_record(f) for f in k.tables()]
    return json.dumps({"kind": "class", "count": len(records), "members": records}, indent=2) + "\n"


def set_listing(t: ConstraintSet) -> str:
    records = [constraint_record(c) for c in t.constraints()]
    return json.dumps({"kind": "set", "count": len(records), "members": records}, indent=2) + "\n"


def format_report(report: ClosureReport, include_runtime: bool = False) -> str:
    """Structured text record of a report.

    Runtime is excluded by default so identical inputs produce identical bytes.
    """
    lines = [f"report: {report.identity_name}"]
    for key in sorted(report.parameters):
        lines.append(f"  {key}: {report.parameters[key]}")
    lines.append(f"  lhs_size: {report.lhs_size}")
    lines.append(f"  rhs_size: {report.rhs_size}")
    lines.append(f"  verdict: {report.verdict}")
    for wit in report.symmetric_difference:
        lines.append(f"  witness: {wit}")
    if include_runtime:
        lines.append(f"  runtime: {report.runtime:.3f}s")
    return "\n".join(lines) + "\n"
