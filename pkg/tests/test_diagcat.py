from itertools import permutations

import pytest

from effhom.abgrp import Z
from effhom.category import FiniteCategory
from effhom.chain import finite_complex, homology_range
from effhom.diagcat import (ChainDiagram, GSpace, SpaceDiagram, diagram_tensor_const, external_product,
                            external_tensor, fixed_points, group_table_cyclic, orbit_category, representable,
                            subgroups)
from effhom.em import em_space
from effhom.errors import AuditError, ParseError, Unsupported
from effhom.simp import FiniteSpace, SimplicialMap, minimal_sphere, nondeg, normalized_chains, point


def s3_table():
    perms = list(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(a[b[i]] for i in range(3))] for b in perms] for a in perms]


def z2xz2_table():
    els = [(a, b) for a in range(2) for b in range(2)]
    return [[els.index(((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)) for y in els] for x in els]


def n_cycle(k, name="c"):
    """Circle with ``k`` vertices ``v0..`` and edges ``e_i: v_i -> v_{i+1}``."""
    dims = {0: [f"v{i}" for i in range(k)], 1: [f"e{i}" for i in range(k)]}
    faces = {f"e{i}": [nondeg(0, f"v{(i + 1) % k}"), nondeg(0, f"v{i}")] for i in range(k)}
    return FiniteSpace(dims, faces, name=name)


def rotation(k, r):
    return {f"{t}{i}": f"{t}{(i + r) % k}" for t in "ve" for i in range(k)}


@pytest.mark.parametrize("table,count", [
    (group_table_cyclic(1), 1), (group_table_cyclic(2), 2), (group_table_cyclic(3), 2),
    (group_table_cyclic(4), 3), (group_table_cyclic(6), 4), (z2xz2_table(), 5), (s3_table(), 6),
])
def test_subgroup_counts(table, count):
    assert len(subgroups(table)) == count


def _fixed_cosets(table, H, K):
    """``|(G/K)^H|``, counted directly on cosets."""
    cosets = {frozenset(table[a][k] for k in K) for a in range(len(table))}
    return sum(1 for c in cosets if all(frozenset(table[h][x] for x in c) == c for h in H))


@pytest.mark.parametrize("table", [group_table_cyclic(2), group_table_cyclic(4), z2xz2_table(), s3_table()])
def test_orbit_category_hom_sets(table):
    O = orbit_category(table)
    for a in O.objects:
        for b in O.objects:
            H, K = O.subgroup_of[a], O.subgroup_of[b]
            assert len(O.hom(a, b)) == _fixed_cosets(table, H, K)


def test_orbit_category_of_z2():
    O = orbit_category(group_table_cyclic(2))
    assert O.objects == ["G/e", "G/G"]
    assert sorted(O.morphisms) == ["G/G->G/G@0", "G/e->G/G@0", "G/e->G/e@0", "G/e->G/e@1"]
    swap = "G/e->G/e@1"
    assert O.compose(swap, swap) == "G/e->G/e@0"
    assert O.compose("G/e->G/G@0", swap) == "G/e->G/G@0"


def free_circle_z2():
    return GSpace(n_cycle(2), group_table_cyclic(2), {1: rotation(2, 1)})


def test_gspace_audit():
    free_circle_z2()
    GSpace(n_cycle(3), group_table_cyclic(3), {1: rotation(3, 1), 2: rotation(3, 2)})
    with pytest.raises(AuditError):
        # rotation by one step is not an involution
        GSpace(n_cycle(3), group_table_cyclic(2), {1: rotation(3, 1)})
    with pytest.raises(AuditError):
        GSpace(n_cycle(2), group_table_cyclic(2), {1: {"v0": "e0", "e0": "v0"}})
    with pytest.raises(AuditError):
        # reflection of the oriented edges does not commute with faces
        GSpace(n_cycle(2), group_table_cyclic(2), {1: {"v0": "v1", "v1": "v0"}})
    with pytest.raises(ParseError):
        GSpace.from_json({"space": {"dims": {"0": ["v"]}}})


def test_fixed_points_of_free_circle():
    Phi = fixed_points(free_circle_z2())
    assert Phi.category.objects == ["G/e", "G/G"]
    assert Phi.space("G/G").nondegenerate(0) == []
    assert [str(G) for G in homology_range(Phi.chains("G/e"), 1)] == ["Z", "Z"]
    # the deck transformation acts through the opposite of the self-map of G/e
    swap = Phi.maps["G/e->G/e@1"]
    assert swap(nondeg(0, "v0")) == nondeg(0, "v1")


def test_fixed_points_of_trivial_action():
    X = GSpace.trivial(minimal_sphere(2), group_table_cyclic(3))
    Phi = fixed_points(X)
    for o in Phi.category.objects:
        assert Phi.space(o).nondegenerate(2) == [nondeg(2, "e")]


def test_space_diagram_audit():
    cat = FiniteCategory.from_group(group_table_cyclic(2))
    g = [m for m in cat.morphisms if not cat.is_identity(m)][0]
    C = n_cycle(3)
    rot = SimplicialMap.from_table(C, C, {s: nondeg(C.dim_of[s], t) for s, t in rotation(3, 1).items()})
    with pytest.raises(AuditError):
        SpaceDiagram(cat, {"*": C}, {g: rot})
    fixed = SimplicialMap.from_table(C, C, {s: nondeg(C.dim_of[s], s) for s in C.dim_of})
    D = SpaceDiagram(cat, {"*": C}, {g: fixed})
    assert D.effective_homology("*").source is D.chains("*")
    with pytest.raises(AuditError):
        SpaceDiagram(cat, {"*": C}, {})


def test_space_diagram_from_json():
    obj = {"category": "pushout", "spaces": {"a": "point", "b": "point",
                                             "c": {"dims": {"0": ["v"], "1": ["e"]}, "faces": {"e": ["v", "v"]}}}}
    D = SpaceDiagram.from_json(obj, category=FiniteCategory.pushout_shape())
    assert D.space("c").nondegenerate(1) == [nondeg(1, "e")]
    with pytest.raises(ParseError):
        SpaceDiagram.from_json({"spaces": {}}, category=FiniteCategory.pushout_shape())


def test_unsupported_without_effective_homology():
    cat = FiniteCategory.terminal()
    D = SpaceDiagram(cat, {"*": em_space(Z, 1)}, check=False)
    with pytest.raises(Unsupported):
        D.effective_homology("*")


def test_representable_is_cellular_and_functorial():
    O = orbit_category(s3_table())
    for o in O.objects:
        R = representable(O, o)
        assert R.check_cellular(0) is None
        assert R.check_functoriality(0) is None
        assert len(R.value(o).basis(0)) == len(O.hom(o, o))


def test_external_tensor_and_const_tensor():
    cat = FiniteCategory.from_group(group_table_cyclic(2))
    R = representable(cat, "*")
    T = external_tensor(R, R)
    assert T.check_cellular(0) is None
    assert T.check_functoriality(0) is None
    assert len(T.cells(0)) == 1 and len(T.complex.basis(0)) == 4
    circle = finite_complex({0: ["v"], 1: ["e"]}, {})
    D = diagram_tensor_const(circle, R)
    assert D.check_cellular(1) is None
    assert D.check_functoriality(1) is None


def test_functoriality_checker_finds_witness():
    cat = FiniteCategory.from_group(group_table_cyclic(2))
    C = finite_complex({0: ["a", "b"]}, {})
    # g sends a -> b -> b: not an involution
    D = ChainDiagram(cat, C, lambda x: "*",
                     lambda f, n, x: {x: 1} if cat.is_identity(f) else {"b": 1})
    assert D.check_functoriality(0) is not None


def test_external_product_of_constant_diagrams():
    cat = FiniteCategory.pushout_shape()
    X = SpaceDiagram.constant(cat, minimal_sphere(1))
    Y = SpaceDiagram.constant(FiniteCategory.terminal(), point())
    P = external_product(X, Y)
    assert len(P.category.objects) == 3
    for o in P.category.objects:
        H = homology_range(normalized_chains(P.space(o)), 1)
        assert [str(G) for G in H] == ["Z", "Z"]
