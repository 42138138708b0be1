"""Bousfield-Kan model of the homotopy left Kan extension and its effective homology.

A simplex of ``hoLan_p X`` is a class of ``(t, x, f_1, ..., f_n, g)`` with
``t`` a simplex of ``Delta^n``, ``x`` a simplex of ``X(i_0)``, ``f_k`` a chain
of composable morphisms of ``I`` and ``g: p(i_n) -> j``.  The canonical
representative has ``t`` surjective onto ``[n]`` and no identity in the
chain; it is reached by collapsing along the face relations (missing
vertices of ``t``) and the degeneracy relations (identities in the chain).

Generators are stored with ``x`` first: the base of a nondegenerate simplex
is ``(x, t, (i_0, (f_1, ..., f_n)), g)``, read as a simplex of
``X(i_0) x Delta^n``.  With this order the relative chains of
``(X(i_0) x Delta^n, X(i_0) x boundary)`` are ``s^n C(X(i_0))`` with no sign.
"""

from itertools import combinations

from .category import Functor
from .chain import ChainComplex, LinearMap
from .diagcat import CellularDiagram
from .errors import IllFormed
from .reduct import (Reduction, StrongEquivalence, compose_equivalences, compose_reductions,
                     equivalence_from_reduction, filtered_assembly,
                     tag_equivalence)
from .simp import (RawSpace, Simplex, StandardSimplex, nondeg, shi_terms, shuffles,
                   strip_common, surjection, _degenerate_by)


def enumerate_nondeg_chains(category, k):
    """Identity-free composable chains ``(i_0, (f_1, ..., f_k))``."""
    return category.nondegenerate_chains(k)


def _chain_end(I, chain):
    i0, fs = chain
    return I.cod(fs[-1]) if fs else i0


def bk_canonicalize(X, p, x, t, chain, g):
    """Canonical representative of the raw simplex ``(t, x, chain, g)``.

    ``x`` is a normal-form simplex of ``X(i_0)``, ``t`` a weakly increasing
    vertex tuple in ``[n]`` (``n`` = chain length).  Returns the canonical
    ``(x, t, chain, g)``.
    """
    I, J = X.category, p.target
    i0, fs = chain
    fs = list(fs)
    for a, b in zip(fs, fs[1:]):
        if I.cod(a) != I.dom(b):
            raise IllFormed(f"non-composable chain {a!r}, {b!r}")
    if fs and I.dom(fs[0]) != i0:
        raise IllFormed("chain does not start at its source object")
    end = I.cod(fs[-1]) if fs else i0
    if J.dom(g) != p.obj(end):
        raise IllFormed(f"{g!r} does not start at p({end!r})")
    t = list(t)
    while True:
        n = len(fs)
        present = set(t)
        missing = [k for k in range(n + 1) if k not in present]
        if missing:
            k = missing[0]
            if k == 0:
                x = X.maps[fs[0]](x)
                i0 = I.cod(fs[0])
                fs = fs[1:]
            elif k == n:
                g = J.compose(g, p.mor(fs[-1]))
                fs = fs[:-1]
            else:
                fs = fs[:k - 1] + [I.compose(fs[k], fs[k - 1])] + fs[k + 1:]
            t = [v - 1 if v > k else v for v in t]
            continue
        ids = [k for k, f in enumerate(fs) if I.is_identity(f)]
        if ids:
            k = ids[0] + 1          # f_k joins vertices k-1 and k
            fs = fs[:k - 1] + fs[k:]
            t = [v - 1 if v >= k else v for v in t]
            continue
        return x, tuple(t), (i0, tuple(fs)), g


class BKSpace(RawSpace):
    """The Bousfield-Kan model of ``hoLan_p X`` over all objects ``j`` at once."""

    def __init__(self, X, p, name=None):
        self.X = X
        self.p = p
        self.I = X.category
        self.J = p.target
        self.finite = False
        self.name = name or "hoLan"
        self._chains = {}

    def chains(self, k):
        if k not in self._chains:
            self._chains[k] = enumerate_nondeg_chains(self.I, k)
        return self._chains[k]

    def raw_apply(self, raw, op):
        x, t, chain, g = raw
        x2 = self.X.spaces[chain[0]].apply(x, op)
        t2 = tuple(t[o] for o in op)
        return bk_canonicalize(self.X, self.p, x2, t2, chain, g)

    def normalize(self, raw, n):
        x, t, chain, g = raw
        et = {s for s in range(len(t) - 1) if t[s] == t[s + 1]}
        common = et & set(x.degens)
        if not common:
            return Simplex(n, (), raw)
        m = n - len(common)
        xs = Simplex(m, strip_common(x.degens, common), x.base)
        ts = tuple(t[s] for s in range(len(t)) if (s - 1) not in common)
        return Simplex(n, tuple(sorted(common, reverse=True)), (xs, ts, chain, g))

    @staticmethod
    def filtration(s):
        return len(s.base[2][1])

    def obj_of(self, s):
        return self.J.cod(s.base[3])

    def act(self, h, s):
        x, t, chain, g = s.base
        return Simplex(s.dim, s.degens, (x, t, chain, self.J.compose(h, g)))

    def nondegenerate_filtered(self, q, k):
        """Nondegenerate ``q``-simplices with chain length ``k`` (finite values only)."""
        out = []
        if k > q:
            return out
        for chain in self.chains(k):
            Xi = self.X.spaces[chain[0]]
            end = _chain_end(self.I, chain)
            homs = self.J.hom_from(self.p.obj(end))
            for et in combinations(range(q), q - k):
                t = surjection(q, et)
                free = [s for s in range(q) if s not in et]
                for m in range(q - len(free), q + 1):
                    for ex in combinations(free, q - m):
                        for a in Xi.nondegenerate(m):
                            x = Simplex(q, tuple(sorted(ex, reverse=True)), a.base)
                            for g in homs:
                                out.append(nondeg(q, (x, t, chain, g)))
        return out

    def nondegenerate(self, q):
        out = []
        for k in range(q + 1):
            out.extend(self.nondegenerate_filtered(q, k))
        return out

    def sample_filtered(self, q, k, rng):
        chains = self.chains(k)
        if not chains or k > q:
            return None
        chain = rng.choice(chains)
        Xi = self.X.spaces[chain[0]]
        et = sorted(rng.sample(range(q), q - k))
        free = [s for s in range(q) if s not in et]
        m = rng.randrange(q - len(free), q + 1)
        a = Xi.sample(m, rng)
        if a is None:
            return None
        ex = rng.sample(free, q - m)
        x = Simplex(q, tuple(sorted(ex, reverse=True)), a.base)
        g = rng.choice(self.J.hom_from(self.p.obj(_chain_end(self.I, chain))))
        return nondeg(q, (x, surjection(q, et), chain, g))

    def sample(self, q, rng):
        return self.sample_filtered(q, rng.randrange(q + 1), rng)

    def value_finite(self):
        return all(S.finite for S in self.X.spaces.values())


def holan_space(X, p):
    return BKSpace(X, p)


def _boundary_split(H, n, s):
    """Split ``d s`` into the same-filtration part and the strictly lower part."""
    k = H.filtration(s)
    same, lower = {}, {}
    if n == 0:
        return same, lower
    for i in range(n + 1):
        y = H.face(s, i)
        if y.degens:
            continue
        target = same if H.filtration(y) == k else lower
        target[y] = target.get(y, 0) + (-1 if i % 2 else 1)
    return ({a: b for a, b in same.items() if b}, {a: b for a, b in lower.items() if b})


def holan_chains(H):
    """Normalized chains of the BK model as a cellular-free chain diagram over ``J``."""
    from .simp import normalized_chains
    return normalized_chains(H)


def skeletal_filtration(H, n):
    """Generators of degree ``n`` grouped by filtration index (finite values only)."""
    return {k: H.nondegenerate_filtered(n, k) for k in range(n + 1)}


class HolanResult:
    """Output of :func:`holan_effective`.

    ``space``: the BK model; ``equivalence``: ``C(hoLan) <= . => ef`` on total
    complexes with generators tagged by filtration; ``effective``: the
    effective side as a cellular diagram over ``J``; ``chains``: the chain
    diagram of the model (tagged generators).
    """

    def __init__(self, space, equivalence, effective, chains):
        self.space = space
        self.equivalence = equivalence
        self.effective = effective
        self.chains = chains

    def homology(self, j, n):
        from .chain import homology
        return homology(self.effective.value(j), n)

    def basepoint_cell(self, cell, n):
        """Whether an effective cell of degree ``n`` comes from the basepoint subdiagram.

        Meaningful when every value has a single vertex and a single degree-0
        effective generator: the cell ``(k, chain, c)`` then lies over the
        basepoint exactly when ``c`` has degree ``n - k = 0``.
        """
        return cell[0] == n


def gk_equivalence(H, k):
    """Strong equivalence of the ``k``-th filtration quotient ``G_k`` with its effective model.

    ``G_k`` is the direct sum over identity-free chains and ``g`` of the relative
    chains of ``X(i_0) x (Delta^k, boundary)``; the relative Eilenberg-Zilber
    reduction takes it to ``s^k C(X(i_0))``, which is then carried to
    ``s^k C^ef(X(i_0))`` by the given pointwise equivalences.
    """
    X, I = H.X, H.I
    all_finite = H.value_finite()
    Dk = StandardSimplex(k)

    def eq_at(chain):
        return X.effective_homology(chain[0])

    # G_k: nondegenerate BK simplices of chain length k with the same-filtration differential
    def dG(n, s):
        return _boundary_split(H, n, s)[0]

    G = ChainComplex(dG, (lambda n: H.nondegenerate_filtered(n, k)) if all_finite else None,
                     name=f"G{k}", sample=lambda n, rng: H.sample_filtered(n, k, rng))

    def summands():
        for chain in H.chains(k):
            for g in H.J.hom_from(H.p.obj(_chain_end(I, chain))):
                yield chain, g

    def sum_complex(tag, role):
        def d(n, key):
            _, chain, g, c = key
            C = role(eq_at(chain))
            return {(tag, chain, g, c2): v for c2, v in C.d.on_gen(n - k, c).items()}

        effective = all(role(eq_at(ch)).is_effective for ch in H.chains(k))
        basis = None
        if effective:
            def basis(n):
                if n < k:
                    return []
                return [(tag, chain, g, c) for chain, g in summands() for c in role(eq_at(chain)).basis(n - k)]

        def sample(n, rng):
            chains = H.chains(k)
            if n < k or not chains:
                return None
            chain = rng.choice(chains)
            g = rng.choice(H.J.hom_from(H.p.obj(_chain_end(I, chain))))
            c = role(eq_at(chain)).sample(n - k, rng)
            return None if c is None else (tag, chain, g, c)
        return ChainComplex(d, basis, name=f"s^{k}{tag}", sample=sample)

    S = sum_complex("s", lambda e: e.source)

    def alpha(n, s):
        x, t, chain, g = s.base
        if t[n - k:] != tuple(range(k + 1)):
            return {}
        front = X.spaces[chain[0]].apply(x, tuple(range(n - k + 1)))
        if front.degens:
            return {}
        return {("s", chain, g, front): 1}

    def beta(n, key):
        _, chain, g, a = key
        Xi = X.spaces[chain[0]]
        p = n - k
        out = {}
        iota = Dk.top()
        for al, be, sign in shuffles(p, k):
            x = _degenerate_by(Xi, a, be)
            t = _degenerate_by(Dk, iota, al)
            traw = Dk.raw(t)
            s = nondeg(n, (x, traw, chain, g))
            out[s] = out.get(s, 0) + sign
        return {a2: v for a2, v in out.items() if v}

    def eta(n, s):
        x, t, chain, g = s.base
        Xi = X.spaces[chain[0]]
        tt = Dk.normalize(t, n)
        out = {}
        for pair, v in shi_terms(Xi, Dk, x, tt).items():
            xx, yy = pair.base
            traw = Dk.raw(yy)
            if len(set(traw)) != k + 1:
                continue
            key = nondeg(n + 1, (xx, traw, chain, g))
            out[key] = out.get(key, 0) + v
        return {a2: v for a2, v in out.items() if v}

    ez = Reduction(G, S, LinearMap(alpha, 0, name="AW"), LinearMap(beta, 0, name="EML"),
                   LinearMap(eta, 1, name="SHI"))

    left_identity = all(eq_at(ch).left.is_identity for ch in H.chains(k))
    T = sum_complex("e", lambda e: e.target)

    def role_map(tag, attr, side):
        def fn(n, key):
            _, chain, g, c = key
            r = getattr(eq_at(chain), side)
            f = getattr(r, attr)
            return {(tag, chain, g, c2): v for c2, v in f.on_gen(n - k, c).items()}
        return fn

    if left_identity:
        right = Reduction(S, T, LinearMap(role_map("e", "alpha", "right"), 0),
                          LinearMap(role_map("s", "beta", "right"), 0),
                          LinearMap(role_map("s", "eta", "right"), 1))
        return equivalence_from_reduction(compose_reductions(ez, right))
    Hat = sum_complex("h", lambda e: e.hat)
    left = Reduction(Hat, S, LinearMap(role_map("s", "alpha", "left"), 0),
                     LinearMap(role_map("h", "beta", "left"), 0),
                     LinearMap(role_map("h", "eta", "left"), 1))
    right = Reduction(Hat, T, LinearMap(role_map("e", "alpha", "right"), 0),
                      LinearMap(role_map("h", "beta", "right"), 0),
                      LinearMap(role_map("h", "eta", "right"), 1))
    return compose_equivalences(equivalence_from_reduction(ez), StrongEquivalence(left, right))


def _inner_bk(tagged):
    """The BK simplex inside a filtration-tagged generator ``(k, s)``."""
    return tagged[1]


def holan_effective(X, p, bound=None):
    """Effective homology of ``C(hoLan_p X)`` as a diagram over ``p.target``."""
    H = BKSpace(X, p)
    J = H.J
    pieces_cache = {}

    def piece(k):
        if k not in pieces_cache:
            pieces_cache[k] = tag_equivalence(gk_equivalence(H, k), k)
        return pieces_cache[k]

    def delta(n, tg):
        k, s = tg
        lower = _boundary_split(H, n, s)[1]
        return {(H.filtration(y), y): v for y, v in lower.items()}

    eq = filtered_assembly(piece, LinearMap(delta, -1, name="delta"), filtration=lambda g: g[0],
                           max_filtration=lambda n: n, bound=bound)

    # chain diagram of the model (tagged generators) and the effective cellular diagram
    def obj_model(tg):
        return H.obj_of(tg[1])

    def act_model(h, n, tg):
        return {(tg[0], H.act(h, tg[1])): 1}

    from .diagcat import ChainDiagram
    model = ChainDiagram(J, eq.source, obj_model, act_model, name="C(hoLan)")

    I = H.I

    def start(chain):
        return p.obj(_chain_end(I, chain))

    def obj_ef(tg):
        return J.cod(tg[1][2])

    def act_ef(h, n, tg):
        k, (tag, chain, g, c) = tg
        return {(k, (tag, chain, J.compose(h, g), c)): 1}

    def cells(n):
        out = []
        for k in range(n + 1):
            for chain in H.chains(k):
                a = start(chain)
                E = X.effective_homology(chain[0]).target
                for c in E.basis(n - k):
                    out.append(((k, ("e", chain, J.identity(a), c)), a))
        return out

    def decompose(tg):
        k, (tag, chain, g, c) = tg
        return (k, (tag, chain, J.identity(start(chain)), c)), g

    def place(cell, f):
        k, (tag, chain, g, c) = cell
        return (k, (tag, chain, J.compose(f, g), c))

    effective = CellularDiagram(J, eq.target, obj_ef, act_ef, cells, decompose, place, name="ef")
    return HolanResult(H, eq, effective, model)


def hocolim_effective(X, bound=None):
    """``hocolim X`` (left Kan extension to the terminal category)."""
    p = Functor.to_terminal(X.category)
    return holan_effective(X, p, bound)


def cofibrant_replacement(X, bound=None):
    """``X^cof = hoLan_id X`` with its effective homology."""
    p = Functor.identity(X.category)
    res = holan_effective(X, p, bound)
    res.evaluation = lambda s: evaluation_map(X, s)
    return res


def evaluation_map(X, s):
    """``X^cof -> X``: ``(t, x, f_1..f_n, g) -> X(g f_n ... f_1)(x)`` in ``X(j)``."""
    I = X.category
    x, t, (i0, fs), g = s.base
    m = I.identity(i0)
    for f in fs:
        m = I.compose(f, m)
    m = I.compose(g, m)
    y = X.maps[m](x)
    if s.degens:
        return X.spaces[I.cod(m)].apply(y, surjection(s.dim, s.degens))
    return y


def direct_model_homology(H, j, n):
    """``H_n`` of the (degreewise finite) BK model at ``j`` by direct Smith normal form."""
    from .chain import homology
    from .simp import normalized_chains
    C = normalized_chains(H)
    Cj = ChainComplex(C.d, lambda m: [s for s in H.nondegenerate(m) if H.obj_of(s) == j])
    return homology(Cj, n)


def model_cellular(H):
    """The BK model's chains as a cellular diagram (finite values only).

    Cells are the canonical simplices whose last component ``g`` is an
    identity; every other simplex is ``g_*`` of exactly one of them.  This is
    the direct, unreduced model, used as an oracle against the effective side.
    """
    from .simp import normalized_chains
    J = H.J
    C = normalized_chains(H)
    if H.value_finite():
        C = ChainComplex(C.d, H.nondegenerate, name=C.name)

    def act(h, n, s):
        return {H.act(h, s): 1}

    def cells(n):
        out = []
        for s in H.nondegenerate(n):
            g = s.base[3]
            if J.is_identity(g):
                out.append((s, J.dom(g)))
        return out

    def decompose(s):
        x, t, chain, g = s.base
        cell = Simplex(s.dim, s.degens, (x, t, chain, J.identity(J.dom(g))))
        return cell, g

    def place(cell, f):
        return H.act(f, cell)

    return CellularDiagram(J, C, H.obj_of, act, cells, decompose, place, name="C(hoLan) cellular")
