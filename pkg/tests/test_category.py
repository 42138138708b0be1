import pytest

from effhom.category import FiniteCategory, Functor, check_group_table
from effhom.errors import AuditError, ParseError


def klein_table():
    return [[a ^ b for b in range(4)] for a in range(4)]


def test_terminal_and_group_categories():
    T = FiniteCategory.terminal()
    assert T.objects == ["*"] and T.morphisms == ["id"]
    G = FiniteCategory.from_group(klein_table())
    assert len(G.morphisms) == 4
    assert sum(1 for m in G.morphisms if G.is_identity(m)) == 1
    for f in G.morphisms:
        assert G.compose(f, f) == G.identity("*")


def test_pushout_shape():
    P = FiniteCategory.pushout_shape()
    assert sorted(P.objects) == ["a", "b", "c"]
    assert P.hom("c", "a") == ["f"] and P.hom("c", "b") == ["g"]
    assert P.hom("a", "b") == []


def test_opposite_and_product():
    P = FiniteCategory.pushout_shape()
    Q = P.opposite()
    assert Q.dom("f") == "a" and Q.cod("f") == "c"
    Q.audit()
    G = FiniteCategory.from_group([[0, 1], [1, 0]])
    GP = G.product(P)
    GP.audit()
    assert len(GP.morphisms) == len(G.morphisms) * len(P.morphisms)


def test_nondegenerate_chains_count():
    G = FiniteCategory.from_group([[(a + b) % 3 for b in range(3)] for a in range(3)])
    for k in range(4):
        assert len(G.nondegenerate_chains(k)) == 2 ** k
    P = FiniteCategory.pushout_shape()
    assert len(P.nondegenerate_chains(1)) == 2
    assert P.nondegenerate_chains(2) == []


def test_json_round_trip():
    P = FiniteCategory.pushout_shape()
    Q = FiniteCategory.from_json(P.to_json())
    assert sorted(Q.morphisms) == sorted(P.morphisms)
    assert Q.compose("f", Q.identity("c")) == "f"


def test_malformed_composition_names_triple():
    obj = {"objects": ["a", "b"],
           "morphisms": [{"name": "f", "dom": "a", "cod": "b"}, {"name": "g", "dom": "b", "cod": "a"}],
           "compose": [["g", "f", "f"], ["f", "g", "id_b"]]}
    with pytest.raises(AuditError) as err:
        FiniteCategory.from_json(obj)
    assert err.value.witness == ("g", "f", "f")


def test_associativity_violation_detected():
    # two endomorphisms e, u of one object with e∘e = e, u∘u = id but e∘u, u∘e chosen inconsistently
    mors = [("id", ("*", "*")), ("e", ("*", "*")), ("u", ("*", "*"))]
    comp = {("id", "id"): "id", ("id", "e"): "e", ("e", "id"): "e", ("id", "u"): "u", ("u", "id"): "u",
            ("e", "e"): "e", ("u", "u"): "id", ("e", "u"): "u", ("u", "e"): "e"}
    with pytest.raises(AuditError):
        FiniteCategory(["*"], mors, comp, {"*": "id"})


def test_malformed_json_is_parse_error():
    with pytest.raises(ParseError):
        FiniteCategory.from_json({"objects": ["a"], "morphisms": [{"name": "f"}]})


def test_group_table_checks():
    assert check_group_table(klein_table()) == 0
    with pytest.raises(AuditError):
        check_group_table([[0, 1], [0, 1]])


def test_functors():
    P = FiniteCategory.pushout_shape()
    p = Functor.to_terminal(P)
    assert p.obj("a") == "*" and p.mor("f") == "id"
    i = Functor.identity(P)
    assert i.mor("g") == "g"
