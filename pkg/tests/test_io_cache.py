import json

import pytest

from funcon import ClosureReport, Scheme, coord, indet
from funcon.cache import ResultCache, cache_key, resolve_cache_dir
from funcon.instance_io import (
    InstanceParseError,
    InstanceSemanticError,
    class_listing,
    constraint_record,
    format_report,
    function_record,
    parse_instance,
    parse_scheme_literal,
    scheme_literal,
    serialize_instance,
    set_listing,
)

from conftest import AND, cls, cset, C_LEQ

DOC = """{
  "domains": {"bool": 2},
  "functions": {"and": {"dom": "bool", "cod": "bool", "arity": 2, "table": [0, 0, 0, 1]}},
  "relations": {"leq": {"domain": "bool", "arity": 2, "tuples": [[0, 0], [0, 1], [1, 1]]}},
  "constraints": {"c_leq": {"antecedent": "leq", "consequent": "leq"}},
  "classes": {"K2": {"dom": "bool", "cod": "bool", "members": ["and"]}},
  "sets": {"T2": {"dom": "bool", "cod": "bool", "members": ["c_leq"]}},
  "schemes": {"swap": "target=2; V=0; h1=[c2,c1]"}
}"""


def test_parse_instance_bindings():
    doc = parse_instance(DOC)
    assert doc.function("and") == AND
    assert sorted(doc.relation("leq").tuples()) == [(0, 0), (0, 1), (1, 1)]
    assert doc.constraint("c_leq") == C_LEQ
    assert doc.function_class("K2") == cls(AND)
    assert doc.constraint_set("T2") == cset(C_LEQ)
    assert doc.scheme("swap").maps == ((1, 0),)


def test_parse_syntax_error_has_position():
    with pytest.raises(InstanceParseError) as exc:
        parse_instance("{ not json")
    assert "line" in str(exc.value) and "column" in str(exc.value)


def test_semantic_errors_name_the_binding():
    bad_table = json.loads(DOC)
    bad_table["functions"]["and"]["table"] = [0, 0, 0]
    with pytest.raises(InstanceSemanticError, match="function 'and'.*expected 4 entries"):
        parse_instance(json.dumps(bad_table))

    dangling = json.loads(DOC)
    dangling["constraints"]["c_leq"]["antecedent"] = "nope"
    with pytest.raises(InstanceSemanticError, match="relation 'nope'"):
        parse_instance(json.dumps(dangling))

    out_of_range = json.loads(DOC)
    out_of_range["relations"]["leq"]["tuples"] = [[0, 2]]
    with pytest.raises(InstanceSemanticError, match="relation 'leq'.*out of range"):
        parse_instance(json.dumps(out_of_range))

    mixed = json.loads(DOC)
    mixed["relations"]["r1"] = {"domain": "bool", "arity": 1, "tuples": [[0]]}
    mixed["constraints"]["bad"] = {"antecedent": "leq", "consequent": "r1"}
    with pytest.raises(InstanceSemanticError, match="constraint 'bad'.*arity"):
        parse_instance(json.dumps(mixed))


def test_serialize_parse_roundtrip_is_canonicalization():
    doc = parse_instance(DOC)
    canonical = serialize_instance(doc)
    again = serialize_instance(parse_instance(canonical))
    assert canonical == again  # idempotent
    # parse of the canonical form reproduces the same bindings
    doc2 = parse_instance(canonical)
    assert doc2.function_class("K2") == doc.function_class("K2")
    assert doc2.constraint_set("T2") == doc.constraint_set("T2")


def test_scheme_literal_roundtrip():
    s = Scheme.of(2, 1, [[coord(1), indet(1)], [indet(1), coord(2)]])
    text = scheme_literal(s)
    assert text == "target=2; V=1; h1=[c1,v1]; h2=[v1,c2]"
    assert parse_scheme_literal(text) == s


def test_scheme_literal_errors():
    with pytest.raises(InstanceSemanticError, match="missing 'target'"):
        parse_scheme_literal("V=1; h1=[v1]")
    with pytest.raises(InstanceSemanticError, match="out of range"):
        parse_scheme_literal("target=1; V=0; h1=[c2]")
    with pytest.raises(InstanceSemanticError, match="h1"):
        parse_scheme_literal("target=1; V=0; h2=[c1]")


def test_listings_are_sorted_and_stable():
    k = cls(AND)
    a = class_listing(k)
    b = class_listing(cls(AND))
    assert a == b
    assert json.loads(a)["count"] == 1
    s = set_listing(cset(C_LEQ))
    assert json.loads(s)["members"][0]["antecedent"] == [[0, 0], [0, 1], [1, 1]]


def test_format_report_excludes_runtime_by_default():
    rep = ClosureReport("t15i", {"n": 2, "m": 1}, 4, 4, [], "equal", runtime=1.23)
    text = format_report(rep)
    assert "runtime" not in text
    assert "verdict: equal" in text
    assert "runtime: 1.230s" in format_report(rep, include_runtime=True)


def test_cache_roundtrip(tmp_path):
    cache = ResultCache(tmp_path)
    key = cache_key("close", "inputs", {"m": 2})
    assert cache.load(key) is None
    cache.store(key, "payload\n")
    assert cache.load(key) == "payload\n"


def test_cache_rejects_corrupt_and_stale(tmp_path, capsys):
    cache = ResultCache(tmp_path)
    key = cache_key("op", "x", {})
    cache.store(key, "value")
    # corrupt the entry
    path = tmp_path / f"{key}.json"
    path.write_text("{broken")
    assert cache.load(key) is None
    assert "corrupt cache entry" in capsys.readouterr().err
    # stale tool version
    cache.store(key, "value")
    raw = json.loads(path.read_text())
    raw["tool_version"] = "0.0.0"
    path.write_text(json.dumps(raw))
    assert cache.load(key) is None


def test_cache_dir_resolution(monkeypatch, tmp_path):
    monkeypatch.delenv("FUNCON_CACHE_DIR", raising=False)
    assert resolve_cache_dir(None) is None
    monkeypatch.setenv("FUNCON_CACHE_DIR", str(tmp_path / "env"))
    assert resolve_cache_dir(None) == tmp_path / "env"
    # the flag wins over the environment
    assert resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"
