"""Diagrams of spaces and chain complexes over finite categories.

A chain diagram ``C: I -> Ch`` is stored as one total complex holding the
values at all objects at once, together with ``obj_of(gen)`` (the object a
generator lives over) and the action ``act(f, n, gen)`` of morphisms.  A
cellular diagram additionally exposes its cells ``c_a`` (each over an
object ``i_a``) and the unique decomposition ``gen = f_* c_a``.
"""

import random

from .category import FiniteCategory, check_group_table
from .chain import ChainComplex, tensor, _add_into
from .errors import AuditError, ParseError, Unsupported
from .reduct import identity_equivalence
from .simp import (FiniteSpace, ProductSpace, SimplicialMap, Simplex, nondeg, normalize_pair,
                   normalized_chains)


class SpaceDiagram:
    """Functor ``I -> sSet``: objects to spaces, morphisms to simplicial maps.

    ``equivalences`` optionally attaches effective homology ``C(X(i)) <= . => ef``
    to objects whose spaces are infinite; finite spaces get the identity.
    """

    def __init__(self, category, spaces, maps=None, equivalences=None, check=True, strict=False,
                 max_dim=3, samples=500):
        self.category = category
        self.spaces = dict(spaces)
        maps = dict(maps or {})
        self.maps = {}
        for f in category.morphisms:
            if f in maps:
                self.maps[f] = maps[f]
            elif category.is_identity(f):
                self.maps[f] = SimplicialMap.identity(self.spaces[category.dom(f)])
            else:
                raise AuditError("missing morphism assignment", f)
        self.equivalences = dict(equivalences or {})
        self._chains = {}
        if check:
            self.audit(max_dim=max_dim, strict=strict, samples=samples)

    def space(self, i):
        return self.spaces[i]

    def __call__(self, x):
        return self.maps[x] if x in self.maps else self.spaces[x]

    def chains(self, i):
        if i not in self._chains:
            self._chains[i] = normalized_chains(self.spaces[i])
        return self._chains[i]

    def effective_homology(self, i):
        """Strong equivalence ``C(X(i)) <= . => effective``."""
        if i in self.equivalences:
            return self.equivalences[i]
        if self.spaces[i].finite:
            self.equivalences[i] = identity_equivalence(self.chains(i))
            return self.equivalences[i]
        raise Unsupported(f"no effective homology attached to the value at {i!r}")

    def _probes(self, i, n, samples, rng):
        X = self.spaces[i]
        if X.finite:
            return X.all_simplices(n)
        out = []
        for _ in range(samples):
            x = X.sample(n, rng)
            if x is not None:
                out.append(x)
        return out

    def audit(self, max_dim=3, strict=False, samples=500, seed=0):
        """Check typing, simpliciality and functoriality of the maps on probes.

        Finite spaces are probed exhaustively; infinite ones with ``samples``
        random simplices per degree (``strict`` raises on any failure, the
        default raises as well: the flag only widens the probe set).
        """
        rng = random.Random(seed)
        cat = self.category
        samples = samples * (4 if strict else 1)
        for f in cat.morphisms:
            m = self.maps[f]
            src = self.spaces[cat.dom(f)]
            for n in range(max_dim + 1):
                for x in self._probes(cat.dom(f), n, samples, rng):
                    y = m(x)
                    if y.dim != x.dim:
                        raise AuditError("map preserves dimension", (f, x))
                    for i in range(n + 1):
                        if n and m(src.face(x, i)) != self.spaces[cat.cod(f)].face(y, i):
                            raise AuditError("simplicial map commutes with faces", (f, x, i))
        for (g, f), gf in cat.compose_table.items():
            if cat.is_identity(f) and cat.is_identity(g):
                continue
            for n in range(max_dim + 1):
                for x in self._probes(cat.dom(f), n, samples // 4 or 1, rng):
                    if self.maps[gf](x) != self.maps[g](self.maps[f](x)):
                        raise AuditError("functoriality", (g, f, x))

    @classmethod
    def constant(cls, category, X, **kw):
        ident = SimplicialMap.identity(X)
        return cls(category, {o: X for o in category.objects}, {f: ident for f in category.morphisms}, **kw)

    @classmethod
    def from_json(cls, obj, category=None, **kw):
        """``{"category": ..., "spaces": {obj: finite space}, "maps": {mor: {simplex: image}}}``."""
        from .simp import point
        try:
            cat = category or FiniteCategory.from_json(obj["category"])
            spaces = {}
            for o in cat.objects:
                entry = obj["spaces"][o]
                spaces[o] = point() if entry == "point" else FiniteSpace.from_json(entry, name=str(o))
            maps = {}
            for f, table in obj.get("maps", {}).items():
                X, Y = spaces[cat.dom(f)], spaces[cat.cod(f)]
                maps[f] = _map_from_table(X, Y, table)
            for f in cat.morphisms:
                if f not in maps and not cat.is_identity(f):
                    X, Y = spaces[cat.dom(f)], spaces[cat.cod(f)]
                    if _is_point(Y):
                        maps[f] = SimplicialMap.to_point(X, Y)
                    else:
                        raise ParseError(f"missing map for morphism {f!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed diagram: {exc}") from exc
        return cls(cat, spaces, maps, **kw)


def _is_point(Y):
    return Y.max_dim == 0 and len(Y.dims.get(0, [])) == 1


def _map_from_table(X, Y, table):
    """Simplicial map from ``{simplex name: image}``; images are names or face-expressions."""
    images = {}
    for s, img in table.items():
        m = X.dim_of[s]
        if isinstance(img, str):
            img = {"base": img, "degens": []}
        images[s] = Simplex(m, tuple(sorted(img.get("degens", []), reverse=True)), img["base"])
    for n, names in X.dims.items():
        for s in names:
            if s not in images:
                if _is_point(Y):
                    images[s] = Simplex(n, tuple(range(n - 1, -1, -1)), Y.dims[0][0])
                else:
                    raise ParseError(f"no image for simplex {s!r}")
    return SimplicialMap(X, Y, lambda b, m: images[b], name="table")


class ChainDiagram:
    """Functor ``I -> Ch`` as a total complex with object labels and an action."""

    def __init__(self, category, complex, obj_of, act, name=None):
        self.category = category
        self.complex = complex
        self.obj_of = obj_of
        self.act = act
        self.name = name

    def value(self, j):
        """The complex ``C(j)`` (effective when the total complex is)."""
        C = self.complex
        basis = (lambda n: [g for g in C.basis(n) if self.obj_of(g) == j]) if C.is_effective else None
        return ChainComplex(C.d, basis, name=f"{C.name}({j})")

    def check_functoriality(self, max_degree, probes=None):
        """First ``(g, f, gen)`` with ``(gf)_* != g_* f_*`` or a non-chain-map action (or None)."""
        cat = self.category
        for n in range(max_degree + 1):
            gens = probes(n) if probes else self.complex.basis(n)
            for x in gens:
                i = self.obj_of(x)
                for f in cat.hom_from(i):
                    fx = self.act(f, n, x)
                    if cat.is_identity(f) and fx != {x: 1}:
                        return (f, f, x)
                    # chain map
                    lhs = _apply(lambda m, y: self.act(f, m, y), n - 1, self.complex.d.on_gen(n, x))
                    rhs = self.complex.d.apply_terms(n, fx)
                    if n and lhs != rhs:
                        return ("d", f, x)
                    for g in cat.hom_from(cat.cod(f)):
                        gfx = _apply(lambda m, y: self.act(g, m, y), n, fx)
                        if gfx != self.act(cat.compose(g, f), n, x):
                            return (g, f, x)
        return None


def _apply(fn, n, terms):
    out = {}
    for y, c in terms.items():
        _add_into(out, fn(n, y), c)
    return out


class CellularDiagram(ChainDiagram):
    """Chain diagram with a cellular basis ``{f_* c_a : f in I(i_a, -)}``.

    ``cells(n)`` lists ``(c, i_c)``; ``decompose(gen)`` returns ``(c, f)`` with
    ``gen = f_* c``; ``place(c, f)`` builds the generator ``f_* c``.
    """

    def __init__(self, category, complex, obj_of, act, cells, decompose, place, name=None):
        super().__init__(category, complex, obj_of, act, name)
        self.cells = cells
        self.decompose = decompose
        self.place = place

    def check_cellular(self, max_degree):
        """Decompose-then-reassemble is the identity and the basis is exactly the orbit set."""
        cat = self.category
        for n in range(max_degree + 1):
            orbit = set()
            for c, i in self.cells(n):
                for f in cat.hom_from(i):
                    g = self.place(c, f)
                    if g in orbit:
                        return ("orbit not free", c, f)
                    orbit.add(g)
                    if self.decompose(g) != (c, f):
                        return ("decompose", c, f)
            if orbit != set(self.complex.basis(n)):
                return ("basis mismatch", n)
        return None


def representable(category, i):
    """``Z I(i, -)`` in degree 0; single cell ``id_i``."""
    cat = category
    ident = cat.identity(i)
    C = ChainComplex(lambda n, f: {}, basis=lambda n: list(cat.hom_from(i)) if n == 0 else [],
                     name=f"Z{cat.name or 'I'}({i},-)")
    return CellularDiagram(
        cat, C, obj_of=lambda f: cat.cod(f), act=lambda h, n, f: {cat.compose(h, f): 1},
        cells=lambda n: [(ident, i)] if n == 0 else [],
        decompose=lambda f: (ident, f), place=lambda c, f: cat.compose(f, c))


def diagram_tensor_const(Cp, D):
    """``C' (x) D`` objectwise; generators ``(p, c', d)``, morphisms act on ``d``."""
    T = tensor(Cp, D.complex)

    def act(h, n, key):
        p, c, d = key
        return {(p, c, e): v for e, v in D.act(h, n - p, d).items()}

    if isinstance(D, CellularDiagram):
        def cells(n):
            return [((p, c, cell), i) for p in range(n + 1) for c in Cp.basis(p) for cell, i in D.cells(n - p)]

        def decompose(key):
            p, c, d = key
            cell, f = D.decompose(d)
            return (p, c, cell), f

        def place(cell, f):
            p, c, d = cell
            return (p, c, D.place(d, f))
        return CellularDiagram(D.category, T, lambda key: D.obj_of(key[2]), act, cells, decompose, place)
    return ChainDiagram(D.category, T, lambda key: D.obj_of(key[2]), act)


def external_tensor(D1, D2):
    """``D1 (x) D2`` over ``I x J``; the cellular basis is the set of pairs of cells."""
    cat = D1.category.product(D2.category)
    T = tensor(D1.complex, D2.complex)

    def act(fg, n, key):
        f, g = fg
        p, a, b = key
        out = {}
        for a2, u in D1.act(f, p, a).items():
            for b2, v in D2.act(g, n - p, b).items():
                out[(p, a2, b2)] = out.get((p, a2, b2), 0) + u * v
        return out

    def obj_of(key):
        return (D1.obj_of(key[1]), D2.obj_of(key[2]))

    def cells(n):
        return [((p, a, b), (i, j)) for p in range(n + 1) for a, i in D1.cells(p) for b, j in D2.cells(n - p)]

    def decompose(key):
        p, a, b = key
        ca, f = D1.decompose(a)
        cb, g = D2.decompose(b)
        return (p, ca, cb), (f, g)

    def place(cell, fg):
        p, a, b = cell
        return (p, D1.place(a, fg[0]), D2.place(b, fg[1]))
    return CellularDiagram(cat, T, obj_of, act, cells, decompose, place)


def external_product(X, Y):
    """``X x^ Y: I x J -> sSet``, ``(i, j) -> X(i) x Y(j)``."""
    cat = X.category.product(Y.category)
    spaces = {(i, j): ProductSpace(X.spaces[i], Y.spaces[j]) for i, j in cat.objects}
    maps = {}
    for f, g in cat.morphisms:
        P = spaces[(X.category.dom(f), Y.category.dom(g))]
        Q = spaces[(X.category.cod(f), Y.category.cod(g))]
        mf, mg = X.maps[f], Y.maps[g]
        maps[(f, g)] = SimplicialMap(P, Q, lambda b, m, mf=mf, mg=mg: normalize_pair(mf(b[0]), mg(b[1])))
    return SpaceDiagram(cat, spaces, maps, check=False)


# groups, orbit categories and fixed points

def _closure(table, gens):
    e = next(i for i in range(len(table)) if all(table[i][g] == g for g in range(len(table))))
    H = {e} | set(gens)
    frontier = list(H)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(H):
                for c in (table[a][b], table[b][a]):
                    if c not in H:
                        H.add(c)
                        nxt.append(c)
        frontier = nxt
    return frozenset(H)


def subgroups(table):
    """All subgroups of a finite group, sorted by (order, elements)."""
    check_group_table(table)
    n = len(table)
    found = {_closure(table, [])}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(n):
                if g not in H:
                    K = _closure(table, list(H) + [g])
                    if K not in found:
                        found.add(K)
                        nxt.append(K)
        frontier = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def _inverse(table, a):
    e = next(i for i in range(len(table)) if all(table[i][g] == g for g in range(len(table))))
    return next(b for b in range(len(table)) if table[a][b] == e)


def orbit_name(table, H):
    if len(H) == 1:
        return "G/e"
    if len(H) == len(table):
        return "G/G"
    return "G/{" + ",".join(str(h) for h in sorted(H)) + "}"


def orbit_category(table):
    """Orbit category: one object ``G/H`` per subgroup, equivariant maps as morphisms.

    The morphism ``G/H -> G/K`` sending ``eH`` to ``aK`` (with ``a^-1 H a <= K``)
    is named ``"G/H->G/K@a"`` for the least element ``a`` of the coset.
    """
    subs = subgroups(table)
    names = {H: orbit_name(table, H) for H in subs}
    mors = []
    info = {}
    for H in subs:
        for K in subs:
            seen = set()
            for a in range(len(table)):
                coset = frozenset(table[a][k] for k in K)
                if coset in seen:
                    continue
                ainv = _inverse(table, a)
                if all(table[table[ainv][h]][a] in K for h in H):
                    seen.add(coset)
                    rep = min(coset)
                    name = f"{names[H]}->{names[K]}@{rep}"
                    mors.append((name, (names[H], names[K])))
                    info[name] = (H, K, rep)
    comp = {}
    for g, (K1, L, b) in info.items():
        for f, (H, K, a) in info.items():
            if K != K1:
                continue
            rep = min(table[table[a][b]][l] for l in L)
            comp[(g, f)] = f"{names[H]}->{names[L]}@{rep}"
    e = next(i for i in range(len(table)) if all(table[i][g] == g for g in range(len(table))))
    ids = {names[H]: f"{names[H]}->{names[H]}@{min(table[e][h] for h in H)}" for H in subs}
    cat = FiniteCategory([names[H] for H in subs], mors, comp, ids, name="O_G")
    cat.orbit_info = info
    cat.group_table = table
    cat.subgroup_of = {names[H]: H for H in subs}
    return cat


class GSpace:
    """Finite simplicial set with a simplicial action of a finite group.

    ``action[g][s]`` is the image of the nondegenerate simplex ``s`` under the
    group element with index ``g`` (identity entries may be omitted).
    """

    def __init__(self, space, table, action, check=True):
        self.space = space
        self.table = table
        n = len(table)
        self.e = check_group_table(table)
        self.action = {}
        for g in range(n):
            given = action.get(g, action.get(str(g), {}))
            self.action[g] = {s: given.get(s, s) for names in space.dims.values() for s in names}
        if check:
            self.audit()

    def act(self, g, x):
        """``g . x`` for any simplex in normal form."""
        return Simplex(x.dim, x.degens, self.action[g][x.base])

    def audit(self):
        X = self.space
        for g in range(len(self.table)):
            for n, names in X.dims.items():
                for s in names:
                    t = self.action[g][s]
                    if X.dim_of.get(t) != n:
                        raise AuditError("action preserves dimension", (g, s))
                    for i in range(n + 1 if n else 0):
                        if X.face(nondeg(n, t), i) != self.act(g, X.face(nondeg(n, s), i)):
                            raise AuditError("action commutes with faces", (g, s, i))
        for s in X.dim_of:
            if self.action[self.e][s] != s:
                raise AuditError("identity acts trivially", s)
            for a in range(len(self.table)):
                for b in range(len(self.table)):
                    if self.action[a][self.action[b][s]] != self.action[self.table[a][b]][s]:
                        raise AuditError("action law", (a, b, s))

    def fixed_subspace(self, H):
        X = self.space
        keep = {s for s in X.dim_of if all(self.action[h][s] == s for h in H)}
        dims = {n: [s for s in names if s in keep] for n, names in X.dims.items()}
        faces = {s: X.faces[s] for s in keep if s in X.faces}
        return FiniteSpace(dims, faces, name=f"{X.name}^H", check=False)

    @classmethod
    def from_json(cls, obj):
        try:
            space = FiniteSpace.from_json(obj["space"])
            table = [list(r) for r in obj["group"]]
            action = {int(g): dict(m) for g, m in obj.get("action", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed G-space: {exc}") from exc
        return cls(space, table, action)

    @classmethod
    def trivial(cls, space, table):
        return cls(space, table, {})


def fixed_points(gspace, orbit_cat=None):
    """``Phi(X)``: the diagram ``G/H -> X^H`` over the opposite of the orbit category."""
    O = orbit_cat or orbit_category(gspace.table)
    Oop = O.opposite()
    Oop.orbit_info = O.orbit_info
    Oop.group_table = O.group_table
    Oop.subgroup_of = O.subgroup_of
    spaces = {o: gspace.fixed_subspace(O.subgroup_of[o]) for o in O.objects}
    maps = {}
    for f in O.morphisms:
        H, K, a = O.orbit_info[f]
        src, dst = spaces[O.cod(f)], spaces[O.dom(f)]
        maps[f] = SimplicialMap(src, dst, lambda b, m, a=a: gspace.act(a, nondeg(m, b)), name=f)
    return SpaceDiagram(Oop, spaces, maps)


def group_table_cyclic(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def coefficient_constant(category, G):
    from .abgrp import FEAbDiagram
    return FEAbDiagram.constant(category, G)
