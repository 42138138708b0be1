import random
from math import gcd

import pytest

from bpl_corpus import random_complex
from effhom.abgrp import ComputableHom, FEAbDiagram, FEAbGroup, Z, cyclic
from effhom.category import FiniteCategory
from effhom.chain import finite_complex, homology_range
from effhom.cohom import (bredon_cohomology, bredon_cohomology_range, cohomology_range, cochains,
                          constant_coefficients, dualize, equivariant_operations_range, homotopy_classes_range,
                          natural_transformations, representable_coefficients)
from effhom.diagcat import (CellularDiagram, GSpace, SpaceDiagram, group_table_cyclic, orbit_category)
from effhom.errors import AuditError
from effhom.holan import cofibrant_replacement, hocolim_effective, model_cellular
from effhom.simp import FiniteSpace, SimplicialMap, minimal_sphere, nondeg, point


def over_point(C):
    """A complex as a cellular diagram over the terminal category."""
    cat = FiniteCategory.terminal()
    ident = cat.identity("*")
    return CellularDiagram(cat, C, lambda g: "*", lambda f, n, g: {g: 1},
                           cells=lambda n: [(g, "*") for g in C.basis(n)],
                           decompose=lambda g: (g, ident), place=lambda c, f: c)


def strs(groups):
    return [str(G) for G in groups]


def _hom(a, b):
    """``Hom(Z/a, Z/b)`` orders (0 for Z)."""
    if a == 0:
        return [b]
    if b == 0:
        return []
    return [gcd(a, b)]


def _ext(a, b):
    if a == 0:
        return []
    if b == 0:
        return [a]
    return [gcd(a, b)]


def universal_coefficients(C, q, top):
    """``H^n(C; Z/q)`` from the homology invariant factors."""
    H = homology_range(C, top)
    out = []
    for n in range(top + 1):
        orders = [o for a in H[n].orders for o in _hom(a, q)]
        if n > 0:
            orders += [o for a in H[n - 1].orders for o in _ext(a, q)]
        out.append(str(FEAbGroup.from_orders([o for o in orders if o != 1])))
    return out


def test_circle_and_projective_plane():
    cat = FiniteCategory.terminal()
    Zc = constant_coefficients(cat, Z)
    S1 = finite_complex({0: ["v"], 1: ["e"]}, {})
    RP2 = finite_complex({0: ["v"], 1: ["e"], 2: ["f"]}, {"f": {"e": 2}})
    assert strs(cohomology_range(over_point(S1), Zc, 2)) == ["Z", "Z", "0"]
    assert strs(cohomology_range(over_point(RP2), Zc, 2)) == ["Z", "0", "Z/2"]
    assert strs(cohomology_range(over_point(RP2), constant_coefficients(cat, cyclic(2)), 2)) == ["Z/2"] * 3


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("q", [0, 2, 3, 4])
def test_universal_coefficients(seed, q):
    C = random_complex(random.Random(seed))
    G = Z if q == 0 else cyclic(q)
    cc = dualize(over_point(C), constant_coefficients(FiniteCategory.terminal(), G), 3)
    assert cc.check()
    assert strs(cc.cohomology(n) for n in range(4)) == universal_coefficients(C, q, 3)


def test_cohomology_of_classifying_space():
    X = SpaceDiagram.constant(FiniteCategory.from_group(group_table_cyclic(2)), point())
    res = hocolim_effective(X)
    T = FiniteCategory.terminal()
    assert strs(cohomology_range(res, constant_coefficients(T, Z), 4)) == ["Z", "0", "Z/2", "0", "Z/2"]
    assert strs(cohomology_range(res, constant_coefficients(T, cyclic(2)), 3)) == ["Z/2"] * 4


def test_cochains_need_matching_category():
    X = SpaceDiagram.constant(FiniteCategory.from_group(group_table_cyclic(2)), point())
    res = hocolim_effective(X)
    with pytest.raises(AuditError):
        cochains(res, constant_coefficients(FiniteCategory.pushout_shape(), Z), 2)
    with pytest.raises(AuditError):
        cochains(over_point(finite_complex({0: ["v"]}, {})), constant_coefficients(FiniteCategory.terminal(), Z),
                 1, reduced=True)


def z2_orbits_op():
    return orbit_category(group_table_cyclic(2)).opposite()


def free_circle(k):
    dims = {0: [f"v{i}" for i in range(k)], 1: [f"e{i}" for i in range(k)]}
    faces = {f"e{i}": [nondeg(0, f"v{(i + 1) % k}"), nondeg(0, f"v{i}")] for i in range(k)}
    table = group_table_cyclic(k)
    action = {r: {f"{t}{i}": f"{t}{(i + r) % k}" for t in "ve" for i in range(k)} for r in range(1, k)}
    return GSpace(FiniteSpace(dims, faces), table, action)


def test_bredon_point():
    Oop = z2_orbits_op()
    pt = GSpace.trivial(point(), group_table_cyclic(2))
    assert strs(bredon_cohomology_range(pt, constant_coefficients(Oop, Z), 4)) == ["Z", "0", "0", "0", "0"]
    assert strs(bredon_cohomology_range(pt, constant_coefficients(Oop, cyclic(2)), 4)) == ["Z/2", "0", "0", "0", "0"]
    rep = representable_coefficients(Oop, "G/e")
    assert str(rep.groups["G/G"]) == "0" and str(rep.groups["G/e"]) == "Z + Z"
    assert strs(bredon_cohomology_range(pt, rep, 4)) == ["0"] * 5
    assert str(bredon_cohomology(pt, constant_coefficients(Oop, Z), 0)) == "Z"


@pytest.mark.parametrize("k", [2, 3])
def test_bredon_free_circle_is_quotient_circle(k):
    table = group_table_cyclic(k)
    Oop = orbit_category(table).opposite()
    got = strs(bredon_cohomology_range(free_circle(k), constant_coefficients(Oop, Z), 3))
    quotient = finite_complex({0: ["v"], 1: ["e"]}, {})
    want = strs(cohomology_range(over_point(quotient), constant_coefficients(FiniteCategory.terminal(), Z), 2))
    assert got == want + ["0"]


def test_representable_coefficients_functorial():
    O = orbit_category(group_table_cyclic(4))
    for o in O.objects:
        R = representable_coefficients(O, o)
        assert isinstance(R, FEAbDiagram)
        assert R.groups[o].orders == (0,) * len(O.hom(o, o))


def test_natural_transformations():
    Oop = z2_orbits_op()
    assert str(natural_transformations(constant_coefficients(Oop, Z), constant_coefficients(Oop, Z))) == "Z"
    assert str(natural_transformations(constant_coefficients(Oop, cyclic(2)),
                                       constant_coefficients(Oop, Z))) == "0"


def test_pushout_homotopy_classes():
    cat = FiniteCategory.pushout_shape()
    S1 = minimal_sphere(1)
    maps = {f: SimplicialMap.to_point(S1) for f in cat.morphisms if not cat.is_identity(f) and cat.dom(f) == "c"}
    X = SpaceDiagram(cat, {"a": point(), "b": point(), "c": S1}, maps)
    res = hocolim_effective(X)
    T = FiniteCategory.terminal()
    assert strs(cohomology_range(res, constant_coefficients(T, Z), 3)) == ["Z", "0", "Z", "0"]
    # maps into a constant target factor through the homotopy colimit
    got = strs(homotopy_classes_range(X, constant_coefficients(cat, Z), 2))
    assert got == ["Z", "0", "Z"]


def _model_oracle(Oop, G, top):
    """Cochains of the direct BK model of the constant minimal circle, relative to its base vertex."""
    X = SpaceDiagram.constant(Oop, minimal_sphere(1))
    M = model_cellular(cofibrant_replacement(X).space)

    def at_base(cell, n):
        return cell.base[0].base == "v"
    cc = dualize(M, constant_coefficients(Oop, G), top, exclude=at_base)
    cc.check()
    return strs(cc.cohomology(n) for n in range(top + 1))


@pytest.mark.parametrize("G,expected", [(Z, ["0", "Z", "0", "0"]), (cyclic(2), ["0", "Z/2", "0", "0"])])
def test_equivariant_operations_against_model(G, expected):
    Oop = z2_orbits_op()
    pi = constant_coefficients(Oop, Z)
    rho = constant_coefficients(Oop, G)
    assert strs(equivariant_operations_range(pi, rho, 1, 3)) == expected
    assert _model_oracle(Oop, G, 3) == expected


def test_unreduced_operations_see_the_constants():
    Oop = z2_orbits_op()
    pi = constant_coefficients(Oop, Z)
    got = strs(equivariant_operations_range(pi, pi, 1, 2, reduced=False))
    assert got == ["Z", "Z", "0"]


def test_sign_coefficients_over_group():
    # K(Z, 1) with Z/2 acting by -1: operations into the sign system
    cat = FiniteCategory.from_group(group_table_cyclic(2))
    g = [m for m in cat.morphisms if not cat.is_identity(m)][0]
    sign = FEAbDiagram(cat, {"*": Z}, {g: ComputableHom(Z, Z, [[-1]])})
    got = strs(equivariant_operations_range(sign, sign, 1, 1))
    assert got[0] == "0"
    assert got[1] == str(natural_transformations(sign, sign))
