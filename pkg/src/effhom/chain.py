"""Locally effective and effective chain complexes over the integers.

Chains are finite integer combinations of hashable generator keys in one
degree.  Maps between complexes are given by their values on generators
(``fn(n, gen) -> {gen: coeff}``) and extended linearly; nothing is ever
materialized as a matrix unless a basis is enumerated explicitly.
"""

from .abgrp import FEAbGroup, ComputableHom, IntMatrix, homology_at
from .errors import ComplexMismatch


def sort_key(gen):
    """Total order on generator keys, stable across runs."""
    return repr(gen)


def _add_into(acc, terms, coef=1):
    for g, c in terms.items():
        v = acc.get(g, 0) + coef * c
        if v:
            acc[g] = v
        else:
            acc.pop(g, None)
    return acc


class Chain:
    """Formal integer combination of generators of a fixed degree."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree, terms=None):
        self.degree = degree
        if terms is None:
            self.terms = {}
        elif isinstance(terms, dict):
            self.terms = {g: c for g, c in terms.items() if c}
        else:
            self.terms = _add_into({}, dict(_pairs_sum(terms)))

    @classmethod
    def gen(cls, degree, g, coef=1):
        return cls(degree, {g: coef})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: sort_key(kv[0]))

    def coefficient(self, g):
        return self.terms.get(g, 0)

    def _check(self, other):
        if self.terms and other.terms and self.degree != other.degree:
            raise ComplexMismatch(f"degree {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check(other)
        return Chain(self.degree if self.terms else other.degree, _add_into(dict(self.terms), other.terms))

    def __sub__(self, other):
        self._check(other)
        return Chain(self.degree if self.terms else other.degree, _add_into(dict(self.terms), other.terms, -1))

    def __neg__(self):
        return Chain(self.degree, {g: -c for g, c in self.terms.items()})

    def __rmul__(self, k):
        return Chain(self.degree, {g: k * c for g, c in self.terms.items()}) if k else Chain(self.degree)

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"Chain({self.degree}, 0)"
        body = " + ".join(f"{c}*{g!r}" for g, c in self.items())
        return f"Chain({self.degree}, {body})"


def _pairs_sum(pairs):
    out = {}
    for g, c in pairs:
        out[g] = out.get(g, 0) + c
    return out


class LinearMap:
    """Degree-``shift`` homomorphism of graded free abelian groups.

    ``fn(n, g)`` returns the image of the degree-``n`` generator ``g`` as a
    dict (or :class:`Chain`).  Images are memoized per generator.
    """

    def __init__(self, fn, shift=0, name=None, cache=True):
        self.fn = fn
        self.shift = shift
        self.name = name
        self._cache = {} if cache else None

    def on_gen(self, n, g):
        if self._cache is not None:
            hit = self._cache.get((n, g))
            if hit is not None:
                return hit
        out = self.fn(n, g)
        if isinstance(out, Chain):
            out = out.terms
        if self._cache is not None:
            self._cache[(n, g)] = out
        return out

    def apply_terms(self, n, terms):
        acc = {}
        for g, c in terms.items():
            _add_into(acc, self.on_gen(n, g), c)
        return acc

    def __call__(self, chain):
        return Chain(chain.degree + self.shift, self.apply_terms(chain.degree, chain.terms))

    def __matmul__(self, other):
        """Composite ``self o other``."""
        def fn(n, g):
            return self.apply_terms(n + other.shift, other.on_gen(n, g))
        return LinearMap(fn, self.shift + other.shift, name=f"({self.name} o {other.name})")

    def __add__(self, other):
        if self.shift != other.shift:
            raise ComplexMismatch("adding maps of different degrees")

        def fn(n, g):
            return _add_into(dict(self.on_gen(n, g)), other.on_gen(n, g))
        return LinearMap(fn, self.shift, name=f"({self.name} + {other.name})")

    def __neg__(self):
        return LinearMap(lambda n, g: {h: -c for h, c in self.on_gen(n, g).items()}, self.shift,
                         name=f"-{self.name}")

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return LinearMap(lambda n, g: {h: k * c for h, c in self.on_gen(n, g).items()} if k else {},
                         self.shift, name=f"{k}*{self.name}")

    def __repr__(self):
        return f"LinearMap({self.name}, shift={self.shift})"


def identity_map(shift=0):
    return LinearMap(lambda n, g: {g: 1}, shift, name="id", cache=False)


def zero_map(shift=0):
    return LinearMap(lambda n, g: {}, shift, name="0", cache=False)


class ChainComplex:
    """Chain complex with a distinguished basis.

    Locally effective when only the differential is known; effective when
    ``basis(n)`` enumerates a finite basis of each degree.  ``sample(n, rng)``
    optionally draws random generators for probing infinite complexes.
    """

    def __init__(self, d, basis=None, name=None, sample=None, contains=None):
        if not isinstance(d, LinearMap):
            d = LinearMap(d, -1)
        if d.shift != -1:
            raise ComplexMismatch("differential must have degree -1")
        inner = d
        self.d = LinearMap(lambda n, g: inner.on_gen(n, g) if n > 0 else {}, -1, name=d.name)
        self._basis = basis
        self._basis_cache = {}
        self.name = name
        self._sample = sample
        self._contains = contains

    @property
    def is_effective(self):
        return self._basis is not None

    def basis(self, n):
        if n < 0:
            return []
        if self._basis is None:
            raise ComplexMismatch(f"{self.name or 'complex'} is only locally effective")
        out = self._basis_cache.get(n)
        if out is None:
            out = list(self._basis(n))
            self._basis_cache[n] = out
        return out

    def contains(self, n, g):
        if self._contains is not None:
            return self._contains(n, g)
        if self._basis is not None:
            return g in set(self.basis(n))
        return True

    def sample(self, n, rng):
        if self._sample is not None:
            return self._sample(n, rng)
        if self._basis is not None:
            b = self.basis(n)
            return rng.choice(b) if b else None
        return None

    def boundary(self, chain):
        return self.d(chain)

    def with_differential(self, d, name=None):
        """Same graded group, new differential (used for perturbations)."""
        return ChainComplex(d, self._basis, name=name or self.name, sample=self._sample,
                            contains=self._contains)

    def __repr__(self):
        kind = "effective" if self.is_effective else "locally effective"
        return f"ChainComplex({self.name}, {kind})"


def finite_complex(degrees, differential, name=None):
    """Effective complex from explicit data.

    ``degrees`` maps ``n`` to a list of generators; ``differential`` maps a
    generator to a dict (or list of pairs) of boundary terms.
    """
    degrees = {int(n): list(gs) for n, gs in degrees.items()}
    diff = {g: dict(_pairs_sum(v.items() if isinstance(v, dict) else v)) for g, v in differential.items()}
    return ChainComplex(lambda n, g: diff.get(g, {}), basis=lambda n: degrees.get(n, []), name=name)


def zero_complex():
    return ChainComplex(lambda n, g: {}, basis=lambda n: [], name="0")


def point_complex():
    return finite_complex({0: ["*"]}, {}, name="pt")


def boundary_matrix(C, n):
    """Matrix of ``d_n`` in the enumerated bases (columns: degree ``n``)."""
    rows = C.basis(n - 1)
    cols = C.basis(n)
    index = {g: i for i, g in enumerate(rows)}
    M = IntMatrix.zeros(len(rows), len(cols))
    for j, g in enumerate(cols):
        for h, c in C.d.on_gen(n, g).items():
            M.data[index[h]][j] += c
    return M


def _free(k):
    return FEAbGroup([0] * k)


def homology(C, n):
    """``H_n(C)`` of an effective complex.

    Returns a group whose ``cycles`` attribute lists a representative cycle
    (as a :class:`Chain`) for every generator.
    """
    cn = C.basis(n)
    out_map = ComputableHom(_free(len(cn)), _free(len(C.basis(n - 1))), boundary_matrix(C, n), check=False)
    in_map = ComputableHom(_free(len(C.basis(n + 1))), _free(len(cn)), boundary_matrix(C, n + 1), check=False)
    H, K, incl, proj = homology_at(in_map, out_map)
    cycles = []
    for rep in H.reps:
        # rep is expressed in the coordinates of the cycle group K
        v = incl.matrix @ list(rep)
        cycles.append(Chain(n, {g: c for g, c in zip(cn, v) if c}))
    H.cycles = cycles
    return H


def homology_range(C, max_degree):
    return [homology(C, n) for n in range(max_degree + 1)]


def direct_sum(C, D):
    """``C + D`` with generators tagged ``(0, g)`` and ``(1, g)``."""
    parts = (C, D)

    def d(n, tg):
        t, g = tg
        return {(t, h): c for h, c in parts[t].d.on_gen(n, g).items()}

    basis = None
    if C.is_effective and D.is_effective:
        def basis(n):
            return [(0, g) for g in C.basis(n)] + [(1, g) for g in D.basis(n)]

    def sample(n, rng):
        t = rng.randrange(2)
        g = parts[t].sample(n, rng)
        return None if g is None else (t, g)
    return ChainComplex(d, basis, name=f"({C.name} + {D.name})", sample=sample)


def tensor(C, D):
    """``C (x) D``; generators are ``(p, c, d)`` with ``p = |c|``.

    Koszul sign: ``d(c x d) = dc x d + (-1)^|c| c x dd``.
    """
    def d(n, key):
        p, c, e = key
        out = {}
        if p > 0:
            for h, k in C.d.on_gen(p, c).items():
                out[(p - 1, h, e)] = out.get((p - 1, h, e), 0) + k
        if n - p > 0:
            s = -1 if p % 2 else 1
            for h, k in D.d.on_gen(n - p, e).items():
                out[(p, c, h)] = out.get((p, c, h), 0) + s * k
        return out

    basis = None
    if C.is_effective and D.is_effective:
        def basis(n):
            return [(p, c, e) for p in range(n + 1) for c in C.basis(p) for e in D.basis(n - p)]

    def sample(n, rng):
        p = rng.randrange(n + 1)
        c, e = C.sample(p, rng), D.sample(n - p, rng)
        return None if c is None or e is None else (p, c, e)
    return ChainComplex(d, basis, name=f"({C.name} x {D.name})", sample=sample)


def tensor_maps(f, g):
    """``f (x) g`` on tensor generators, with sign ``(-1)^(|g| |c|)``."""
    def fn(n, key):
        p, c, e = key
        s = -1 if (g.shift * p) % 2 else 1
        out = {}
        fc = f.on_gen(p, c)
        if not fc:
            return out
        ge = g.on_gen(n - p, e)
        for h1, k1 in fc.items():
            for h2, k2 in ge.items():
                key2 = (p + f.shift, h1, h2)
                out[key2] = out.get(key2, 0) + s * k1 * k2
        return {k: v for k, v in out.items() if v}
    return LinearMap(fn, f.shift + g.shift, name=f"({f.name} x {g.name})")


def suspend(C, k):
    """``s^k C``: same generators moved up ``k`` degrees, differential unchanged (no sign)."""
    if k < 0:
        raise ValueError("suspension shift must be >= 0")
    if k == 0:
        return C
    basis = (lambda n: C.basis(n - k)) if C.is_effective else None
    return ChainComplex(lambda n, g: C.d.on_gen(n - k, g), basis, name=f"s^{k}{C.name}",
                        sample=lambda n, rng: C.sample(n - k, rng) if n >= k else None)


def suspend_map(f, k):
    """The map ``s^k f`` between suspended complexes."""
    return LinearMap(lambda n, g: f.on_gen(n - k, g), f.shift, name=f"s^{k}{f.name}")


def check_dd_zero(C, max_degree, probes=None):
    """Return the first generator with ``dd != 0`` (or None)."""
    for n in range(2, max_degree + 1):
        gens = probes(n) if probes else C.basis(n)
        for g in gens:
            if C.d.apply_terms(n - 1, C.d.on_gen(n, g)):
                return (n, g)
    return None


def to_json(C, max_degree):
    """Serialize an effective complex through ``max_degree`` (generators as strings)."""
    degrees = {str(n): [sort_key(g) for g in C.basis(n)] for n in range(max_degree + 1)}
    diff = {}
    for n in range(1, max_degree + 1):
        for g in C.basis(n):
            terms = sorted(((sort_key(h), c) for h, c in C.d.on_gen(n, g).items()))
            diff[sort_key(g)] = [[h, c] for h, c in terms]
    return {"degrees": degrees, "differential": diff}


def from_json(obj):
    degrees = {int(n): list(gs) for n, gs in obj["degrees"].items()}
    diff = {g: [(h, c) for h, c in terms] for g, terms in obj.get("differential", {}).items()}
    return finite_complex(degrees, diff)
