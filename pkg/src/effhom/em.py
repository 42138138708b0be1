"""Eilenberg-MacLane spaces ``K(pi, n)`` and their effective homology for ``n = 1``.

A ``q``-simplex of ``K(pi, n)`` is a normalized ``n``-cocycle on ``Delta^q``
with values in ``pi``.  It is stored as the tuple of its values on the
``n``-faces of ``Delta^q`` (in lexicographic order), each value an element
vector of ``pi``.  Faces and degeneracies are pullbacks along monotone maps.

For ``n = 1`` a cocycle is determined by its values on the edges
``(i, i + 1)``; this is the bar (nerve) description of ``K(pi, 1)``, and the
reduction to the small cyclic complexes is an algebraic Morse matching on
bar words.
"""

from itertools import combinations, product as iproduct

from .abgrp import FEAbGroup, cyclic
from .chain import ChainComplex, LinearMap
from .diagcat import SpaceDiagram
from .errors import Unsupported
from .reduct import (Reduction, compose_reductions, equivalence_from_reduction, identity_equivalence,
                     morse_reduction, tensor_reductions)
from .simp import (ProductSpace, RawSpace, SimplicialMap, Simplex, ez_reduction, nondeg, normalize_pair,
                   normalized_chains, surjection)


class EMSpace(RawSpace):
    """``K(pi, n)`` with ``q``-simplices the normalized cocycles ``Z^n(Delta^q, pi)``."""

    def __init__(self, group, n):
        if n < 1:
            raise ValueError("K(pi, n) needs n >= 1")
        self.group = group
        self.n = n
        self.finite = group.is_trivial()    # K(0, n) is a point
        self.name = f"K({group},{n})"
        self._faces = {}

    def faces_of(self, q):
        """The ``n``-faces of ``Delta^q`` in storage order."""
        if q not in self._faces:
            self._faces[q] = list(combinations(range(q + 1), self.n + 1))
        return self._faces[q]

    def dim_of_table(self, raw):
        """Dimension of a nonempty table (below ``n`` every table is empty)."""
        q = self.n
        while len(self.faces_of(q)) < len(raw):
            q += 1
        return q

    def table(self, raw, q):
        return dict(zip(self.faces_of(q), raw))

    def raw_apply(self, raw, op):
        src = self.table(raw, self.dim_of_table(raw)) if raw else {}
        zero = self.group.zero()
        out = []
        for S in self.faces_of(len(op) - 1):
            image = tuple(op[v] for v in S)
            if len(set(image)) < len(image):
                out.append(zero)
            else:
                out.append(src.get(image, zero))
        return tuple(out)

    def normalize(self, raw, q):
        degens = []
        for t in range(q - 1, -1, -1):
            collapse = tuple(v if v <= t else v - 1 for v in range(q + 1))
            back = tuple(v if v <= t else v + 1 for v in range(q))
            if self.raw_apply(self.raw_apply(raw, back), collapse) == raw:
                degens.append(t)
        if not degens:
            return Simplex(q, (), raw)
        drop = {t + 1 for t in degens}
        mono = tuple(v for v in range(q + 1) if v not in drop)
        return Simplex(q, tuple(degens), self.raw_apply(raw, mono))

    def is_cocycle(self, raw, q):
        G = self.group
        tab = self.table(raw, q)
        for T in combinations(range(q + 1), self.n + 2):
            acc = G.zero()
            for k in range(self.n + 2):
                v = tab[T[:k] + T[k + 1:]]
                acc = G.add(acc, v if k % 2 == 0 else G.neg(v))
            if any(acc):
                return False
        return True

    # bar description (n = 1)

    def from_bar(self, word):
        """1-cocycle whose consecutive-edge values are ``word``."""
        G = self.group
        q = len(word)
        partial = [G.zero()]
        for a in word:
            partial.append(G.add(partial[-1], a))
        return tuple(G.add(partial[j], G.neg(partial[i])) for i, j in self.faces_of(q))

    def bar(self, raw, q):
        tab = self.table(raw, q)
        return tuple(tab[(i, i + 1)] for i in range(q))

    # enumeration and sampling

    def nondegenerate(self, q):
        G = self.group
        if not G.is_finite():
            return super().nondegenerate(q)
        if q == 0:
            return [nondeg(0, ())]
        if self.n == 1:
            nonzero = [e for e in G.elements() if any(e)]
            return [nondeg(q, self.from_bar(w)) for w in iproduct(nonzero, repeat=q)]
        out = []
        for raw in iproduct(G.elements(), repeat=len(self.faces_of(q))):
            if self.is_cocycle(raw, q) and not self.normalize(raw, q).degens:
                out.append(nondeg(q, raw))
        return out

    @property
    def finite_per_degree(self):
        return self.group.is_finite()

    def _random_element(self, rng, spread=4):
        return self.group.decide([rng.randint(-spread, spread) for _ in self.group.orders])

    def sample(self, q, rng):
        if q == 0:
            return nondeg(0, ())
        G = self.group
        if G.is_trivial():
            return None
        for _ in range(100):
            if self.n == 1:
                word = [self._random_element(rng) for _ in range(q)]
                raw = self.from_bar(word)
            else:
                lower = list(combinations(range(q + 1), self.n))
                c = {S: self._random_element(rng) for S in lower}
                raw = []
                for S in self.faces_of(q):
                    acc = G.zero()
                    for k in range(len(S)):
                        v = c[S[:k] + S[k + 1:]]
                        acc = G.add(acc, v if k % 2 == 0 else G.neg(v))
                    raw.append(acc)
                raw = tuple(raw)
            s = self.normalize(raw, q)
            if not s.degens:
                return s
        return None


def em_space(group, n):
    """``K(group, n)`` in the cocycle model."""
    return EMSpace(group, n)


def em_map(source, target, hom):
    """Simplicial map ``K(A, n) -> K(B, n)`` induced by ``hom: A -> B`` on cocycle values."""
    def fn(b, q):
        raw = tuple(target.group.decide(hom(v)) for v in b)
        return target.normalize(raw, q)
    return SimplicialMap(source, target, fn, name="K(hom)")


# effective homology for n = 1

def _cyclic_matching(m):
    """Morse matching on bar words of ``Z/m`` (``m = 0`` meaning ``Z``).

    Letters are integers (nonzero representatives).  A letter is a unit when it
    is ``1`` (or ``-1`` for ``Z``).  Scanning left to right, the first non-unit
    letter ``a`` is split as ``[e | a - e]`` (the word is the lower end of a
    pair), unless an earlier unit ``e`` is followed by a letter ``b`` such that
    ``e + b`` is a non-unit of the same sign, in which case the word is the upper
    end obtained by merging.  For ``Z/m`` the blocks ``[1 | m - 1]`` are skipped,
    leaving one critical word per degree; for ``Z`` the critical words are the
    two alternating words of units, cancelled later by a second matching.
    """
    units = {1, -1} if m == 0 else {1}

    def red(a):
        return a % m if m else a

    def unit_of(a):
        return (1 if a > 0 else -1) if m == 0 else 1

    def match(word):
        q, i = len(word), 0
        while i < q:
            a = word[i]
            if a not in units:
                e = unit_of(a)
                partner = word[:i] + (e, red(a - e)) + word[i + 1:]
                return ("lower", partner, -1 if (i + 1) % 2 else 1)
            if i + 1 < q:
                s = red(a + word[i + 1])
                if s != 0 and s not in units and unit_of(s) == a:
                    return ("upper", word[:i] + (s,) + word[i + 2:], -1 if (i + 1) % 2 else 1)
                if s == 0 and m:
                    i += 2          # the block [1 | m - 1] is skipped as a whole
                    continue
            i += 1
        return None

    return match


def bar_chains(m):
    """Normalized bar complex of ``Z/m`` (``Z`` for ``m = 0``) on integer words."""
    def red(a):
        return a % m if m else a

    def d(n, w):
        out = {}
        if n == 0:
            return out
        terms = [(w[1:], 1)]
        for i in range(1, n):
            s = red(w[i - 1] + w[i])
            if s:
                terms.append((w[:i - 1] + (s,) + w[i + 1:], -1 if i % 2 else 1))
        terms.append((w[:-1], -1 if n % 2 else 1))
        for g, c in terms:
            out[g] = out.get(g, 0) + c
        return {g: c for g, c in out.items() if c}

    basis = None
    if m:
        def basis(n):
            return list(iproduct(range(1, m), repeat=n))

    def sample(n, rng):
        if m == 0:
            return tuple(rng.choice([a for a in range(-4, 5) if a]) for _ in range(n))
        return tuple(rng.randrange(1, m) for _ in range(n)) if m > 1 or n == 0 else None

    return ChainComplex(d, basis, name=f"B(Z/{m})" if m else "B(Z)", sample=sample)


def _small_cyclic_complex(m):
    """Circle complex for ``m = 0``, periodic complex ``Z <-0 Z <-m Z <-0 ...`` otherwise."""
    def d(n, g):
        if m == 0 or n % 2 == 1 or n == 0:
            return {}
        return {n - 1: m}

    def basis(n):
        if n < 0:
            return []
        if m == 0:
            return [n] if n <= 1 else []
        return [n]

    def sample(n, rng):
        b = basis(n)
        return b[0] if b else None

    return ChainComplex(d, basis, name="circle" if m == 0 else f"periodic({m})", sample=sample)


def _critical_word(m, n):
    """The critical word of degree ``n`` kept in the small model."""
    other = -1 if m == 0 else m - 1
    return tuple(1 if t % 2 == 0 else other for t in range(n))


def _relabel(rho, m):
    """Rename the critical words of a Morse reduction to degree labels ``n``."""
    def to_small(n, g):
        if g == _critical_word(m, n):
            return n
        raise ValueError(f"unexpected critical word {g!r}")

    alpha = LinearMap(lambda n, g: {to_small(n, w): c for w, c in rho.alpha.on_gen(n, g).items()}, 0)
    beta = LinearMap(lambda n, k: rho.beta.on_gen(n, _critical_word(m, n)) if k == n else {}, 0)
    return Reduction(rho.top, _small_cyclic_complex(m), alpha, beta, rho.eta)


def _unit_reduction(rho):
    """Adjust a Morse reduction whose bottom has extra critical cells in degree >= 2 for Z.

    The Z matching leaves the alternating words starting with ``-1`` as well;
    they are cancelled in pairs by a second matching on the Morse complex.
    """
    B = rho.bottom

    def start(g):
        return g[0] if g else 0

    def match(n, g):
        # pair the word (-1, 1, -1, ...) of degree n >= 2 with the word of degree n + 1
        # starting with 1, and the degree-1 word (-1,) with (1, -1)
        if n >= 1 and start(g) == -1:
            partner = _critical_word(0, n + 1)
            e = B.d.on_gen(n + 1, partner).get(g, 0)
            return ("lower", partner, e) if e in (1, -1) else None
        if n >= 2 and start(g) == 1:
            partner = tuple(-x for x in _critical_word(0, n - 1))
            e = B.d.on_gen(n, g).get(partner, 0)
            return ("upper", partner, e) if e in (1, -1) else None
        return None

    second = morse_reduction(B, match, name="circle")
    return compose_reductions(rho, second, check=False)


def _morse_bound(n):
    return 200 + 50 * n


def cyclic_bar_reduction(m):
    """Reduction of the normalized bar complex of ``Z/m`` (``Z`` for 0) to its small model."""
    B = bar_chains(m)
    match = _cyclic_matching(m)
    rho = morse_reduction(B, lambda n, w: match(w), bound=_morse_bound, name="critical")
    if m == 0:
        rho = _unit_reduction(rho)
    return _relabel(rho, m)


def _bar_iso(space, m):
    """Isomorphism ``C(K(Z/m, 1)) = B(Z/m)`` as a reduction with zero homotopy."""
    B = bar_chains(m)

    def to_word(n, s):
        return {tuple(v[0] for v in space.bar(s.base, n)): 1}

    def from_word(n, w):
        return {nondeg(n, space.from_bar(tuple((a,) for a in w))): 1}

    return Reduction(normalized_chains(space), B, LinearMap(to_word, 0), LinearMap(from_word, 0),
                     LinearMap(lambda n, s: {}, 1))


def _product_iso(space, factors):
    """Isomorphism ``C(K(A + B, 1)) = C(K(A, 1) x K(B, 1))`` (nested pairs, one coordinate at a time)."""
    P = _nested_product(factors)

    def split(s, n):
        word = space.bar(s.base, n)
        return _split_word(factors, word, n)

    def to_prod(n, s):
        x = split(s, n)
        return {} if x.degens else {x: 1}

    def from_prod(n, p):
        word = _join_word(factors, p, n)
        y = space.normalize(space.from_bar(word), n)
        return {} if y.degens else {y: 1}

    return Reduction(normalized_chains(space), normalized_chains(P), LinearMap(to_prod, 0),
                     LinearMap(from_prod, 0), LinearMap(lambda n, s: {}, 1)), P


def _nested_product(factors):
    if len(factors) == 1:
        return factors[0]
    return ProductSpace(factors[0], _nested_product(factors[1:]))


def _split_word(factors, word, n):
    K = factors[0]
    x = K.normalize(K.from_bar(tuple((v[0],) for v in word)), n)
    if len(factors) == 1:
        return x
    y = _split_word(factors[1:], [v[1:] for v in word], n)
    return normalize_pair(x, y)


def _join_word(factors, s, n):
    """Inverse of :func:`_split_word` on normal-form product simplices."""
    if len(factors) == 1:
        K = factors[0]
        return [tuple(v) for v in K.bar(K.raw(s), n)]
    K, rest = factors[0], _nested_product(factors[1:])
    x, y = s.base
    if s.degens:
        sigma = surjection(n, s.degens)
        x, y = K.apply(x, sigma), rest.apply(y, sigma)
    first = K.bar(K.raw(x), n)
    rest = _join_word(factors[1:], y, n)
    return [a + b for a, b in zip(first, rest)]


_PROVIDERS = {}


def register_provider(n, callback):
    """Register ``callback(group, n) -> StrongEquivalence`` for ``C(K(group, n))``."""
    _PROVIDERS[n] = callback


def unregister_provider(n):
    _PROVIDERS.pop(n, None)


class EMProvider:
    """Context manager registering a provider for ``K(pi, n)``, ``n >= 2``."""

    def __init__(self, n, callback):
        self.n, self.callback = n, callback

    def __enter__(self):
        self._old = _PROVIDERS.get(self.n)
        register_provider(self.n, self.callback)
        return self

    def __exit__(self, *exc):
        if self._old is None:
            unregister_provider(self.n)
        else:
            register_provider(self.n, self._old)


def em_reduction(group, space=None):
    """Reduction ``C(K(group, 1)) => (x)_i small(q_i)`` over the cyclic factors."""
    space = space or em_space(group, 1)
    if group.is_trivial():
        return None
    if group.ngens == 1:
        return compose_reductions(_bar_iso(space, group.orders[0]), cyclic_bar_reduction(group.orders[0]),
                                  check=False)
    factors = [em_space(cyclic(q) if q else FEAbGroup([0]), 1) for q in group.orders]
    small = [compose_reductions(_bar_iso(K, q), cyclic_bar_reduction(q), check=False)
             for K, q in zip(factors, group.orders)]
    iso, _ = _product_iso(space, factors)
    return compose_reductions(iso, _product_reduction(factors, small), check=False)


def _product_reduction(factors, small):
    """``C(K1 x (K2 x ...)) => small1 (x) (small2 (x) ...)`` via EZ and tensor reductions."""
    if len(factors) == 1:
        return small[0]
    K = factors[0]
    rest = _nested_product(factors[1:])
    ez = ez_reduction(K, rest)
    inner = _product_reduction(factors[1:], small[1:])
    return compose_reductions(ez, tensor_reductions(small[0], inner), check=False)


def em_effective_homology(group, n=1, space=None):
    """Strong equivalence ``C(K(group, n)) <= C(K(group, n)) => small model``.

    Built in for ``n = 1``; other degrees use a registered provider.
    """
    space = space or em_space(group, n)
    if n != 1:
        if n in _PROVIDERS:
            return _PROVIDERS[n](group, n)
        raise Unsupported(f"no effective homology provider for K(pi, {n})")
    if group.is_trivial():
        return identity_equivalence(normalized_chains(space))
    return equivalence_from_reduction(em_reduction(group, space))


def em_diagram(pi, n, check=True, attach=True):
    """Diagram ``i -> K(pi(i), n)`` with arrows acting on cocycle values."""
    cat = pi.category
    spaces = {o: em_space(pi.groups[o], n) for o in cat.objects}
    maps = {f: em_map(spaces[cat.dom(f)], spaces[cat.cod(f)], pi.homs[f])
            for f in cat.morphisms if not cat.is_identity(f)}
    eqs = {}
    if attach:
        for o in cat.objects:
            eqs[o] = em_effective_homology(pi.groups[o], n, spaces[o])
    return SpaceDiagram(cat, spaces, maps, eqs, check=check, max_dim=3, samples=50)
