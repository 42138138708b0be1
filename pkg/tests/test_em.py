import random

import pytest

from effhom.abgrp import ComputableHom, FEAbDiagram, FEAbGroup, Z, cyclic
from effhom.category import FiniteCategory
from effhom.chain import ChainComplex, homology_range
from effhom.errors import Unsupported
from effhom.em import (EMProvider, cyclic_bar_reduction, em_diagram, em_effective_homology, em_map,
                       em_space, register_provider, unregister_provider)
from effhom.holan import hocolim_effective
from effhom.reduct import identity_equivalence, verify_reduction_auto
from effhom.simp import normalized_chains

GROUPS = {
    "Z": Z,
    "Z/2": cyclic(2),
    "Z/3": cyclic(3),
    "Z/2+Z": FEAbGroup([2, 0]),
    "Z/2+Z/2": FEAbGroup([2, 2]),
}


def names(C, top):
    return [str(G) for G in homology_range(C, top)]


def sampled(space, count=40, seed=0):
    rng = random.Random(seed)
    return lambda q: [s for s in (space.sample(q, rng) for _ in range(count)) if s is not None]


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_simplicial_identities(name):
    K = em_space(GROUPS[name], 1)
    assert K.check_identities(4, probes=sampled(K)) is None


def test_simplicial_identities_degree_two():
    for G in (cyclic(2), Z):
        K = em_space(G, 2)
        assert K.check_identities(4, probes=sampled(K, 15)) is None


def test_bar_description_roundtrip():
    K = em_space(FEAbGroup([3, 0]), 1)
    rng = random.Random(4)
    for _ in range(30):
        word = tuple((rng.randrange(3), rng.randint(-5, 5)) for _ in range(rng.randint(1, 4)))
        raw = K.from_bar(word)
        assert K.is_cocycle(raw, len(word))
        assert K.bar(raw, len(word)) == word


def test_nondegenerate_counts():
    assert [len(em_space(cyclic(2), 1).nondegenerate(q)) for q in range(5)] == [1, 1, 1, 1, 1]
    assert [len(em_space(cyclic(3), 1).nondegenerate(q)) for q in range(4)] == [1, 2, 4, 8]
    K2 = em_space(cyclic(2), 2)
    assert [len(K2.nondegenerate(q)) for q in range(3)] == [1, 0, 1]


def test_degree_two_model_by_direct_homology():
    K = em_space(cyclic(2), 2)
    C = ChainComplex(normalized_chains(K).d, K.nondegenerate)
    assert names(C, 3) == ["Z", "0", "Z/2", "0"]


@pytest.mark.parametrize("name,expected", [
    ("Z", ["Z", "Z", "0", "0", "0"]),
    ("Z/2", ["Z", "Z/2", "0", "Z/2", "0"]),
    ("Z/3", ["Z", "Z/3", "0", "Z/3", "0"]),
    ("Z/2+Z", ["Z", "Z/2 + Z", "Z/2", "Z/2", "Z/2"]),
    ("Z/2+Z/2", ["Z", "Z/2 + Z/2", "Z/2", "Z/2 + Z/2 + Z/2", "Z/2 + Z/2"]),
])
def test_effective_homology(name, expected):
    e = em_effective_homology(GROUPS[name])
    assert names(e.target, 4) == expected


@pytest.mark.parametrize("name", ["Z/2", "Z/3", "Z/2+Z/2"])
def test_effective_homology_matches_direct_homology(name):
    G = GROUPS[name]
    K = em_space(G, 1)
    C = ChainComplex(normalized_chains(K).d, K.nondegenerate)
    e = em_effective_homology(G, space=K)
    assert names(C, 3) == names(e.target, 3)


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_reductions_are_valid(name):
    e = em_effective_homology(GROUPS[name])
    rep = verify_reduction_auto(e.right, 4, count=300)
    assert rep.ok, rep.failures


@pytest.mark.parametrize("m", [0, 2, 3, 4])
def test_cyclic_bar_reduction(m):
    rho = cyclic_bar_reduction(m)
    rep = verify_reduction_auto(rho, 4, count=300)
    assert rep.ok, rep.failures
    assert names(rho.bottom, 3) == names(em_effective_homology(cyclic(m) if m else Z).target, 3)


def test_trivial_group():
    e = em_effective_homology(FEAbGroup([]))
    assert names(e.target, 2) == ["Z", "0", "0"]


def test_higher_degrees_need_a_provider():
    with pytest.raises(Unsupported):
        em_effective_homology(cyclic(2), 2)

    def provider(group, n):
        K = em_space(group, n)
        return identity_equivalence(ChainComplex(normalized_chains(K).d, K.nondegenerate))

    with EMProvider(2, provider):
        e = em_effective_homology(cyclic(2), 2)
        assert names(e.target, 2) == ["Z", "0", "Z/2"]
    with pytest.raises(Unsupported):
        em_effective_homology(cyclic(2), 2)
    register_provider(2, provider)
    try:
        assert em_effective_homology(cyclic(2), 2) is not None
    finally:
        unregister_provider(2)


def test_em_map_doubling():
    K = em_space(Z, 1)
    double = em_map(K, K, ComputableHom(Z, Z, [[2]]))
    rng = random.Random(0)
    probes = lambda q: [s for s in (K.sample(q, rng) for _ in range(20)) if s is not None]
    assert double.check(3, probes=probes) is None
    s = K.normalize(K.from_bar(((1,), (3,))), 2)
    assert K.bar(double(s).base, 2) == ((2,), (6,))


def test_em_diagram_with_doubling_map():
    cat = FiniteCategory.pushout_shape()
    legs = {cat.cod(f): f for f in cat.morphisms if not cat.is_identity(f)}
    pi = FEAbDiagram(cat, {"a": Z, "b": Z, "c": Z},
                     {legs["a"]: ComputableHom(Z, Z, [[2]]), legs["b"]: ComputableHom(Z, Z, [[1]])})
    X = em_diagram(pi, 1)
    res = hocolim_effective(X)
    # gluing along an identity leg: the homotopy pushout is the other leg's target
    assert [str(res.homology("*", n)) for n in range(3)] == ["Z", "Z", "0"]
