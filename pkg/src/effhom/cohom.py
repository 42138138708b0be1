"""Cohomology of diagrams with coefficients in diagrams of abelian groups.

For a cellular chain diagram ``C`` with cells ``c_a`` over objects ``i_a``,
natural transformations ``C_n -> pi`` are determined by their values on the
cells (Yoneda), so ``Hom(C_n, pi) = (+)_a pi(i_a)``.  The codifferential sends
``phi`` to ``phi o d``; writing ``d c = sum_b k_b (f_b)_* c_b`` it reads
``(delta phi)(c) = sum_b k_b pi(f_b)(phi(c_b))``.
"""

from .abgrp import (ComputableHom, FEAbGroup, IntMatrix, TRIVIAL, direct_sum_groups, homology_at,
                    hom_diagram, FEAbDiagram)
from .diagcat import fixed_points
from .errors import AuditError
from .holan import cofibrant_replacement


class CochainComplexFE:
    """Cochain complex of fully effective groups, degrees ``0..top``.

    ``groups[n]`` is ``C^n`` (coordinates grouped by cell), ``codiff[n]`` is
    ``delta: C^n -> C^{n+1}`` for ``n < top``; ``cells[n]`` lists the cells.
    """

    def __init__(self, groups, codiff, cells=None):
        self.groups = groups
        self.codiff = codiff
        self.cells = cells or {}
        self.top = max(groups)

    def check(self):
        """``delta delta = 0`` modulo the orders of the target."""
        for n in range(self.top - 1):
            comp = self.codiff[n + 1].compose(self.codiff[n])
            G = self.groups[n + 2]
            for row, q in zip(comp.matrix.data, G.orders):
                if any((x % q if q else x) for x in row):
                    raise AuditError("delta delta = 0", n)
        return True

    def cohomology(self, n):
        """``H^n`` for ``n < top``."""
        if n >= self.top:
            raise ValueError(f"cochains only known through degree {self.top}")
        incoming = self.codiff[n - 1] if n > 0 else ComputableHom.zero(TRIVIAL, self.groups[0])
        C, K, incl, proj = homology_at(incoming, self.codiff[n])
        return FEAbGroup(C.orders)


def _same_category(D, pi):
    a, b = D.category, pi.category
    if set(a.objects) != set(b.objects) or set(a.morphisms) != set(b.morphisms):
        raise AuditError("coefficient system lives over another category", (a.name, b.name))


def dualize(D, pi, max_degree, exclude=None):
    """``Hom(D_n, pi)`` for ``n <= max_degree + 1`` with the precomposition codifferential.

    ``exclude(cell, n)`` marks the cells of a subcomplex; the result is then the
    relative complex of cochains vanishing on it (the subcomplex property is
    checked).
    """
    _same_category(D, pi)
    top = max_degree + 1
    cells, groups, offsets = {}, {}, {}
    for n in range(top + 1):
        cells[n] = list(D.cells(n))
        if exclude is not None:
            dropped = [c for c, _ in cells[n] if exclude(c, n)]
            cells[n] = [(c, o) for c, o in cells[n] if not exclude(c, n)]
            if n > 0:
                for c in dropped:
                    for gen in D.complex.d.on_gen(n, c):
                        if not exclude(D.decompose(gen)[0], n - 1):
                            raise AuditError("excluded cells do not form a subcomplex", (c, gen))
        offs, pos = {}, 0
        for cell, obj in cells[n]:
            offs[cell] = pos
            pos += pi.groups[obj].ngens
        offsets[n] = offs
        groups[n] = direct_sum_groups([pi.groups[obj] for _, obj in cells[n]])
    codiff = {}
    for n in range(top):
        rows = [[0] * groups[n].ngens for _ in range(groups[n + 1].ngens)]
        for cell, obj in cells[n + 1]:
            r0 = offsets[n + 1][cell]
            for gen, k in D.complex.d.on_gen(n + 1, cell).items():
                c2, f = D.decompose(gen)
                if c2 not in offsets[n]:
                    continue
                c0 = offsets[n][c2]
                M = pi.homs[f].matrix
                for i in range(M.rows):
                    for j in range(M.cols):
                        rows[r0 + i][c0 + j] += k * M[i, j]
        codiff[n] = ComputableHom(groups[n], groups[n + 1],
                                  IntMatrix(rows, groups[n + 1].ngens, groups[n].ngens), check=False)
    return CochainComplexFE(groups, codiff, cells)


def _effective_diagram(X):
    return X.effective if hasattr(X, "effective") else X


def _exclusion(X, reduced):
    if not reduced:
        return None
    if not hasattr(X, "basepoint_cell"):
        raise AuditError("reduced cohomology needs a holan result with a basepoint", type(X).__name__)
    return X.basepoint_cell


def cochains(X, pi, max_degree, reduced=False):
    """Dual cochain complex of a cellular diagram or a holan result."""
    return dualize(_effective_diagram(X), pi, max_degree, _exclusion(X, reduced))


def cohomology(X, pi, n, reduced=False):
    """``H^n`` of a cellular effective diagram (or a holan result) with coefficients ``pi``.

    With ``reduced=True`` the cochains vanish on the basepoint subdiagram.
    """
    return cochains(X, pi, n, reduced).cohomology(n)


def cohomology_range(X, pi, max_degree, reduced=False):
    cc = cochains(X, pi, max_degree, reduced)
    return [cc.cohomology(n) for n in range(max_degree + 1)]


def homotopy_classes(X, pi, n, bound=None, reduced=False):
    """``H^n(X^cof; pi)``, the group of homotopy classes ``[X^cof, K(pi, n)]``.

    ``reduced=True`` gives pointed classes (relative to the basepoint subdiagram;
    every value of ``X`` must then have a single vertex).
    """
    return cohomology(cofibrant_replacement(X, bound), pi, n, reduced)


def homotopy_classes_range(X, pi, max_degree, bound=None, reduced=False):
    return cohomology_range(cofibrant_replacement(X, bound), pi, max_degree, reduced)


def _on_opposite_orbits(gspace, rho):
    phi = fixed_points(gspace)
    _same_category(phi, rho)
    return phi


def bredon_cohomology(gspace, rho, n, bound=None):
    """Bredon cohomology ``H^n_G(X; rho)`` for a finite G-space and ``rho`` over ``O_G^op``."""
    return homotopy_classes(_on_opposite_orbits(gspace, rho), rho, n, bound)


def bredon_cohomology_range(gspace, rho, max_degree, bound=None):
    return homotopy_classes_range(_on_opposite_orbits(gspace, rho), rho, max_degree, bound)


def equivariant_operations(pi, rho, n, k, bound=None, reduced=True):
    """``[K_G(pi, n), K_G(rho, k)]``: ``H^k`` of ``K(pi, n)^cof`` with coefficients ``rho``.

    Classes are pointed by default (cochains relative to the base vertex), so
    degree 0 and the degrees below ``n`` vanish.
    """
    from .em import em_diagram
    X = em_diagram(pi, n, check=False)
    return homotopy_classes(X, rho, k, bound, reduced)


def equivariant_operations_range(pi, rho, n, max_degree, bound=None, reduced=True):
    from .em import em_diagram
    X = em_diagram(pi, n, check=False)
    return homotopy_classes_range(X, rho, max_degree, bound, reduced)


def natural_transformations(pi, rho):
    """``Hom(pi, rho)`` of diagrams (the expected value of degree-matching operations)."""
    H = hom_diagram(pi, rho)
    return FEAbGroup(H.orders)


def constant_coefficients(category, G):
    return FEAbDiagram.constant(category, G)


def representable_coefficients(category, o):
    """``Z J(o, -)``: free on the arrows out of ``o``, arrows act by postcomposition.

    Over ``O_G^op`` this is the coefficient system ``G/H -> Z[O_G(G/H, o)]``.
    """
    basis = {x: list(category.hom(o, x)) for x in category.objects}
    groups = {x: FEAbGroup([0] * len(basis[x])) for x in category.objects}
    homs = {}
    for f in category.morphisms:
        x, y = category.dom(f), category.cod(f)
        cols = [[int(b == category.compose(f, phi)) for b in basis[y]] for phi in basis[x]]
        M = IntMatrix.from_columns(cols, len(basis[y])) if cols else IntMatrix.zeros(len(basis[y]), 0)
        homs[f] = ComputableHom(groups[x], groups[y], M, check=False)
    return FEAbDiagram(category, groups, homs)
