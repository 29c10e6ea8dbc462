import json

import pytest

from rfcert import spec_io as S
from rfcert.groups import FgAbelianGroup, FinitePermGroup, PcGroup, SplitExtensionGroup


def group(rec):
    return S.parse_group(rec)


def error_at(rec):
    with pytest.raises(S.SpecError) as exc:
        S.parse_group(rec)
    return str(exc.value)


def test_core_types():
    assert isinstance(group({"type": "abelian", "rank": 1, "torsion": [2]}), FgAbelianGroup)
    G = group({"type": "finite", "degree": 3, "generators": [[1, 2, 0]], "names": ["r"]})
    assert isinstance(G, FinitePermGroup) and G.order() == 3
    pc = group({"type": "pc", "orders": [2, 3], "names": ["s", "r"], "conjugates": {"r^s": "r^2"}})
    assert isinstance(pc, PcGroup)
    E = group({"type": "semidirect", "fiber": {"type": "finite", "degree": 3, "generators": [[1, 2, 0]]},
               "base": {"type": "abelian", "rank": 1}, "action": [[[2, 0, 1]]]})
    assert isinstance(E, SplitExtensionGroup)


def test_word_values_accept_both_spellings():
    names = {"a": 0, "b": 1}
    assert S.parse_word_value("a*b^-1", names, "$") == ((0, 1), (1, -1))
    assert S.parse_word_value([[0, 1], [1, -1]], names, "$") == ((0, 1), (1, -1))
    with pytest.raises(S.SpecError):
        S.parse_word_value([[5, 1]], names, "$")
    with pytest.raises(S.SpecError):
        S.parse_word_value(3, names, "$")


def test_composite_records():
    asc = group({"type": "asc_hnn", "base": {"type": "free", "rank": 2, "names": ["x", "y"]},
                 "phi": ["x^2", "y*x"]})
    assert asc.names == ("x", "y", "t")
    raag = group({"type": "raag", "vertices": ["a", "b", "c"], "edges": [["a", "b"]]})
    assert len(S.spec_relators(raag)) == 1
    am = group({"type": "amalgam",
                "G1": {"type": "abelian", "rank": 1, "names": ["x"]},
                "G2": {"type": "abelian", "rank": 1, "names": ["y"]},
                "H": {"type": "abelian", "rank": 1, "names": ["h"]},
                "i1": ["x^2"], "i2": ["y^3"]})
    assert am.names == ("x", "y") and S.spec_ngens(am) == 2
    assert S.factor_relators(am, "G1") == [] and S.factor_relators(am, "Z") is None
    hnn = group({"type": "hnn", "base": {"type": "abelian", "rank": 2, "names": ["a", "b"]},
                 "H": ["a"], "K": ["b"]})
    assert hnn.names == ("a", "b", "t")


def test_errors_carry_json_paths():
    assert "$.group.type" in error_at({"type": "lattice"})
    assert "$.group.rank" in error_at({"type": "abelian", "rank": -1})
    assert "$.group.names" in error_at({"type": "free", "rank": 2, "names": ["a", "a"]})
    assert "$.group.phi" in error_at({"type": "asc_hnn", "base": {"type": "free", "rank": 2}, "phi": ["x1"]})
    assert "$.group.stable" in error_at({"type": "asc_hnn", "base": {"type": "free", "rank": 1, "names": ["t"]},
                                         "phi": ["t"]})
    assert "$.group.edges" in error_at({"type": "raag", "vertices": ["a"], "edges": [["a", "a"]]})


def test_load_json_reports_position():
    with pytest.raises(S.SpecError) as exc:
        S.load_json('{\n  "a": ,\n}')
    assert "line 2" in str(exc.value)


def test_dump_is_canonical():
    text = S.dump_json({"b": 1, "a": [1, 2]})
    assert text == json.dumps({"a": [1, 2], "b": 1}, sort_keys=True, indent=2) + "\n"


def test_document_requires_object():
    with pytest.raises(S.SpecError):
        S.parse_spec("[1, 2]")
    doc = S.parse_spec(json.dumps({"group": {"type": "free", "rank": 1}, "element": "x1"}))
    assert doc.field("element") == "x1"


def test_subgroup_images():
    kind, imgs = S.parse_subgroup_images({"images": [[1, 0], [0, 1]], "kind": "stabilizer"}, 2, "$.c")
    assert kind == "stabilizer" and imgs == [(1, 0), (0, 1)]
    with pytest.raises(S.SpecError):
        S.parse_subgroup_images({"images": [[1, 0]], "kind": "normal"}, 1, "$.c")
