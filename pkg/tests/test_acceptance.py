"""Acceptance suite: ten end-to-end criteria, each printing one PASS/FAIL line."""

import os
import random
import subprocess
import sys

from bpl_corpus import TOP, corpus, instance, random_complex
from test_abgrp import _check_hom_diagram, check_snf, random_matrix
from test_cli import EXPECTED
from test_cohom import free_circle, over_point
from test_holan import degree_two_pushout, pushout, z2_point

from effhom.abgrp import ComputableHom, FEAbDiagram, FEAbGroup, Z, cyclic
from effhom.category import FiniteCategory, Functor
from effhom.chain import Chain, finite_complex, homology
from effhom.cohom import (bredon_cohomology_range, cohomology_range, constant_coefficients, dualize,
                          equivariant_operations_range, representable_coefficients)
from effhom.diagcat import GSpace, SpaceDiagram, fixed_points, group_table_cyclic, orbit_category
from effhom.em import cyclic_bar_reduction, em_effective_homology
from effhom.holan import (BKSpace, cofibrant_replacement, direct_model_homology, gk_equivalence,
                          hocolim_effective, model_cellular)
from effhom.reduct import (basic_perturbation, compose_equivalences, compose_reductions, easy_perturbation,
                           gauss_reduction, StrongEquivalence, identity_reduction, verify_reduction_auto)
from effhom.simp import StandardSimplex, ez_reduction, minimal_sphere, normalized_chains, point


def report(capsys, number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def strs(groups):
    return [str(G) for G in groups]


# 1. reduction identities

def _all_reductions():
    out = []
    S1, S2 = minimal_sphere(1), minimal_sphere(2)
    for X, Y in ((S1, S1), (S2, S1), (S2, S2), (StandardSimplex(2), StandardSimplex(1))):
        out.append((f"EZ {X.name} x {Y.name}", ez_reduction(X, Y), 4))
    for seed in range(24):
        rho, delta, _ = instance(seed)
        out.append((f"BPL corpus {seed}", basic_perturbation(rho, delta), TOP))
    rho, _, _ = instance(3)
    out.append(("EPL", easy_perturbation(rho, rho.bottom.d.scale(-2)), TOP))
    C = random_complex(random.Random(11))
    r = gauss_reduction(C, TOP)
    out.append(("Gauss composite", compose_reductions(r, gauss_reduction(r.bottom, TOP)), TOP))
    cyl = compose_equivalences(StrongEquivalence(identity_reduction(C), r),
                               StrongEquivalence(r, r), check=False)
    out += [("cylinder left", cyl.left, TOP), ("cylinder right", cyl.right, TOP)]
    X = pushout(S2)
    H = BKSpace(X, Functor.to_terminal(X.category))
    for k in range(4):
        e = gk_equivalence(H, k)
        out += [(f"G_{k} left", e.left, 4), (f"G_{k} right", e.right, 4)]
    for name, make in (("hocolim S1 pushout", lambda: hocolim_effective(pushout(S1))),
                       ("hocolim RP2 pushout", lambda: hocolim_effective(degree_two_pushout())),
                       ("hocolim Z/2 point", lambda: hocolim_effective(z2_point())),
                       ("cofibrant Z/2 point", lambda: cofibrant_replacement(z2_point()))):
        eq = make().equivalence
        out += [(name + " left", eq.left, 4), (name + " right", eq.right, 4)]
    for m in (0, 2, 3):
        out.append((f"Morse bar Z/{m}", cyclic_bar_reduction(m), 4))
    for G in (Z, cyclic(2), cyclic(3), FEAbGroup([2, 0]), FEAbGroup([2, 2])):
        out.append((f"K({G},1)", em_effective_homology(G).right, 4))
    return out


def test_criterion_1_reduction_identities(capsys):
    failures, checked = [], 0
    reductions = _all_reductions()
    for name, rho, top in reductions:
        rep = verify_reduction_auto(rho, top, limit=200, count=1000)
        checked += rep.checked
        if not rep.ok:
            failures.append((name, rep.failures[0]))
    report(capsys, 1, "every reduction satisfies the five identities", not failures,
           f"{len(reductions)} reductions, {checked} probes, violations: {failures[:1]}")


# 2. perturbation lemma conformance

def _psi(rho, delta, c):
    total, term, sign = Chain(c.degree, {}), c, 1
    while term:
        total = total + sign * term
        term = delta(rho.eta(term))
        sign = -sign
    return total


def test_criterion_2_perturbation_lemma(capsys):
    instances = corpus(24)
    bad, points = [], 0
    for seed, (rho, delta, _) in enumerate(instances):
        pert = basic_perturbation(rho, delta)
        rep = verify_reduction_auto(pert, TOP)
        if not rep.ok:
            bad.append((seed, rep.failures[0]))
            continue
        for n in range(1, TOP + 1):
            for g in pert.bottom.basis(n):
                c = Chain.gen(n, g)
                points += 1
                if pert.delta_bottom(c) != rho.alpha(_psi(rho, delta, delta(rho.beta(c)))):
                    bad.append((seed, "delta' != alpha psi delta beta", g))
    report(capsys, 2, "BPL outputs valid and delta' = alpha psi delta beta",
           len(instances) >= 20 and not bad, f"{len(instances)} instances, {points} pointwise checks, {bad[:1]}")


# 3. hocolim oracle equivalence

def _finite_corpus():
    from effhom.cli import load_input, parse_category, parse_diagram
    out = []
    for task, name, _ in EXPECTED:
        if task != "homology-of-hocolim" or name.startswith("em_"):
            continue
        data = load_input(f"bundled:{name}")
        cat = parse_category(data["category"])
        out.append((name, parse_diagram(data["diagram"], cat)))
    out.append(("RP2 pushout", degree_two_pushout()))
    out.append(("free circle fixed points", fixed_points(free_circle(2))))
    out.append(("S3 pushout", pushout(minimal_sphere(3))))
    return out


def test_criterion_3_hocolim_oracle(capsys):
    compared, mismatches, skipped = 0, [], []
    for name, X in _finite_corpus():
        res = hocolim_effective(X)
        H = res.space
        size = sum(len(H.nondegenerate(n)) for n in range(5))
        if size > 500:
            skipped.append(name)
            continue
        for j in res.effective.category.objects:
            for n in range(5):
                a, b = res.homology(j, n), direct_model_homology(H, j, n)
                compared += 1
                if a.orders != b.orders:
                    mismatches.append((name, j, n, str(a), str(b)))
    report(capsys, 3, "effective hocolim homology matches direct SNF on the canonical model",
           compared > 0 and not mismatches,
           f"{compared} groups compared, skipped (over 500 generators): {skipped}, {mismatches[:1]}")


# 4. suspension

def test_criterion_4_suspension(capsys):
    results = {}
    for n in (1, 2):
        res = hocolim_effective(pushout(minimal_sphere(n)))
        got = [str(res.homology("*", k)) for k in range(5)]
        sphere = [str(homology(normalized_chains(minimal_sphere(n + 1)), k)) for k in range(5)]
        results[n] = (got, sphere)
    ok = all(a == b for a, b in results.values())
    report(capsys, 4, "hocolim(* <- S^n -> *) has the homology of S^(n+1), n = 1, 2", ok, str(results))


# 5. cofibrant replacement sanity

def _periodic_oracle(top):
    """``Z <-0- Z <-2- Z <-0- Z <-2- ...``: homology of Z/2 from its periodic resolution."""
    degrees = {n: [n] for n in range(top + 2)}
    diff = {n: ({n - 1: 2} if n % 2 == 0 else {}) for n in range(1, top + 2)}
    C = finite_complex(degrees, diff)
    return [str(homology(C, n)) for n in range(top + 1)]


def test_criterion_5_cofibrant_replacement(capsys):
    cof = cofibrant_replacement(z2_point())
    got_cof = [str(cof.homology("*", n)) for n in range(4)]
    hoc = hocolim_effective(z2_point())
    got_hoc = [str(hoc.homology("*", n)) for n in range(4)]
    oracle = _periodic_oracle(3)
    ok = got_cof == ["Z", "0", "0", "0"] and got_hoc == ["Z", "Z/2", "0", "Z/2"] == oracle
    report(capsys, 5, "X^cof(*) = (Z,0,0,0) and hocolim = (Z,Z/2,0,Z/2) for the Z/2 point", ok,
           f"cof {got_cof}, hocolim {got_hoc}, periodic oracle {oracle}")


# 6. Bredon point axiom

def test_criterion_6_bredon_point(capsys):
    table = group_table_cyclic(2)
    Oop = orbit_category(table).opposite()
    pt = GSpace.trivial(point(), table)
    systems = {"constant Z": constant_coefficients(Oop, Z),
               "constant Z/2": constant_coefficients(Oop, cyclic(2)),
               "representable Z O(-, G/e)": representable_coefficients(Oop, "G/e")}
    results, ok = {}, True
    for name, rho in systems.items():
        got = strs(bredon_cohomology_range(pt, rho, 4))
        want = [str(rho.groups["G/G"])] + ["0"] * 4
        results[name] = got
        ok = ok and got == want
    report(capsys, 6, "H^n_{Z/2}(pt; rho) = rho(G/G) at n = 0 and 0 for 1 <= n <= 4", ok, str(results))


# 7. free action

def test_criterion_7_free_circle(capsys):
    table = group_table_cyclic(2)
    Oop = orbit_category(table).opposite()
    got = strs(bredon_cohomology_range(free_circle(2), constant_coefficients(Oop, Z), 3))
    quotient = over_point(finite_complex({0: ["v"], 1: ["e"]}, {}))
    q = strs(cohomology_range(quotient, constant_coefficients(FiniteCategory.terminal(), Z), 3))
    ok = got == ["Z", "Z", "0", "0"] == q
    report(capsys, 7, "Bredon cohomology of the free circle equals that of the quotient circle", ok,
           f"bredon {got}, quotient {q}")


# 8. equivariant operations

def _truncated_oracle(Oop, top):
    """Pointed cochains on the direct BK model of the constant minimal circle, a model of K(Z, 1)."""
    X = SpaceDiagram.constant(Oop, minimal_sphere(1))
    M = model_cellular(cofibrant_replacement(X).space)
    cc = dualize(M, constant_coefficients(Oop, Z), top, exclude=lambda cell, n: cell.base[0].base == "v")
    cc.check()
    return [str(cc.cohomology(n)) for n in range(top + 1)]


def test_criterion_8_equivariant_operations(capsys):
    Oop = orbit_category(group_table_cyclic(2)).opposite()
    pi = constant_coefficients(Oop, Z)
    got = strs(equivariant_operations_range(pi, pi, 1, 3))
    oracle = _truncated_oracle(Oop, 3)
    ok = got[1] == "Z" and got[0] == "0" and got == oracle
    report(capsys, 8, "[K_G(Z,1), K_G(Z,k)] is Z at k = 1 and 0 at k = 0", ok,
           f"effective {got}, brute-force oracle {oracle}")


# 9. fully effective abelian groups

def test_criterion_9_abelian_groups(capsys):
    rng = random.Random(2024)
    bad = []
    for i in range(500):
        M = random_matrix(rng, rng.randint(1, 8), rng.randint(1, 8))
        try:
            check_snf(M)
        except AssertionError as exc:
            bad.append((i, str(exc)))
    # hom_diagram against exhaustive enumeration on all-finite diagrams
    cat = FiniteCategory.from_group([[0, 1], [1, 0]])
    g = [m for m in cat.morphisms if not cat.is_identity(m)][0]
    A = FEAbGroup([2, 2])
    swap = FEAbDiagram(cat, {"*": A}, {g: ComputableHom(A, A, [[0, 1], [1, 0]])})
    c2 = FEAbDiagram.constant(cat, cyclic(2))
    P = FiniteCategory.pushout_shape()
    legs = {P.cod(f): f for f in P.morphisms if not P.is_identity(f)}
    B, C = cyclic(4), cyclic(2)
    pa = FEAbDiagram(P, {"a": C, "b": B, "c": B},
                     {legs["a"]: ComputableHom(B, C, [[1]]), legs["b"]: ComputableHom(B, B, [[3]])})
    pb = FEAbDiagram(P, {"a": B, "b": C, "c": B},
                     {legs["a"]: ComputableHom(B, B, [[2]]), legs["b"]: ComputableHom(B, C, [[1]])})
    pairs = [(swap, c2), (c2, swap), (swap, swap), (pa, pb), (pb, pa), (pa, pa)]
    for k, (x, y) in enumerate(pairs):
        try:
            _check_hom_diagram(x, y)
        except AssertionError as exc:
            bad.append(("hom_diagram", k, str(exc)))
    report(capsys, 9, "SNF on 500 random matrices and hom_diagram against enumeration", not bad,
           f"{len(pairs)} diagram pairs, {bad[:1]}")


# 10. determinism

def _cli(task, name, workers, seed):
    env = dict(os.environ, PYTHONHASHSEED=seed)
    proc = subprocess.run([sys.executable, "-m", "effhom", "--task", task, "--input", f"bundled:{name}",
                           "--max-degree", "4", "--workers", str(workers)],
                          capture_output=True, env=env)
    return proc.returncode, proc.stdout


def test_criterion_10_determinism(capsys):
    differing = []
    for task, name, _ in EXPECTED:
        runs = {(w, s): _cli(task, name, w, s) for w, s in ((1, "0"), (1, "17"), (4, "123"))}
        if len(set(runs.values())) != 1:
            differing.append(name)
    report(capsys, 10, "CLI reports byte-identical across runs and 1 vs 4 workers", not differing,
           f"{len(EXPECTED)} reports x 3 runs, differing: {differing}")
