"""Locally effective simplicial sets, products, normalized chains and Eilenberg-Zilber.

A simplex is stored in Eilenberg-Zilber normal form ``s_{j_k} ... s_{j_1} b``
with ``j_k > ... > j_1`` and ``b`` nondegenerate.  Simplicial operators are
monotone maps ``[p] -> [n]`` written as tuples of images; applying one to a
simplex factors it as epi-after-mono so that only faces of nondegenerate
simplices ever have to be computed by the space itself.
"""

from collections import namedtuple
from itertools import combinations

from .chain import ChainComplex, LinearMap, tensor
from .errors import AuditError, ParseError
from .reduct import Reduction

Simplex = namedtuple("Simplex", "dim degens base")
Simplex.__doc__ = "``s_{degens} base`` with ``degens`` strictly decreasing."


def nondeg(dim, base):
    return Simplex(dim, (), base)


# monotone-map combinatorics

def surjection(n, degens):
    """Vertex map ``[n] -> [n - len(degens)]`` of a degeneracy word."""
    rep = set(degens)
    out, v = [], 0
    for t in range(n + 1):
        out.append(v)
        if t not in rep:
            v += 1
    return tuple(out)


def degens_of(surj):
    """Normal-form degeneracy word (decreasing) of a monotone surjection."""
    return tuple(t for t in range(len(surj) - 2, -1, -1) if surj[t] == surj[t + 1])


def factor(op):
    """Monotone ``op`` as ``mono o epi``: returns ``(epi, mono)``."""
    mono = tuple(sorted(set(op)))
    index = {v: i for i, v in enumerate(mono)}
    return tuple(index[v] for v in op), mono


def face_op(n, i):
    """Coface ``[n-1] -> [n]`` skipping ``i``."""
    return tuple(t for t in range(n + 1) if t != i)


def degeneracy_op(n, i):
    """Codegeneracy ``[n+1] -> [n]`` hitting ``i`` twice."""
    return tuple(t if t <= i else t - 1 for t in range(n + 2))


def strip_common(degens, common):
    """Reindex the positions ``degens - common`` after collapsing ``common``."""
    common = set(common)
    rest = [t for t in degens if t not in common]
    return tuple(sorted((t - sum(1 for e in common if e < t) for t in rest), reverse=True))


def normalize_pair(x, y):
    """Normal form of the product simplex ``(x, y)`` (common degeneracies pulled out)."""
    common = set(x.degens) & set(y.degens)
    if not common:
        return Simplex(x.dim, (), (x, y))
    m = x.dim - len(common)
    xs = Simplex(m, strip_common(x.degens, common), x.base)
    ys = Simplex(m, strip_common(y.degens, common), y.base)
    return Simplex(x.dim, tuple(sorted(common, reverse=True)), (xs, ys))


class LESpace:
    """Locally effective simplicial set.

    Subclasses implement ``base_face(b, dim, mono)`` giving the face of the
    nondegenerate simplex ``b`` of dimension ``dim`` spanned by the vertices
    in ``mono`` (a normal-form :class:`Simplex`), and optionally
    ``nondegenerate(n)`` (finite enumeration) and ``sample(n, rng)``.
    """

    name = None
    finite = False

    def base_face(self, b, dim, mono):
        raise NotImplementedError

    def nondegenerate(self, n):
        raise ParseError(f"{self.name or type(self).__name__} has no finite enumeration")

    def sample(self, n, rng):
        if self.finite:
            b = self.nondegenerate(n)
            return rng.choice(b) if b else None
        return None

    def apply(self, x, op):
        """``op^* x`` for a monotone ``op: [p] -> [x.dim]``."""
        m = x.dim - len(x.degens)
        sigma = surjection(x.dim, x.degens)
        comp = tuple(sigma[t] for t in op)
        epi, mono = factor(comp)
        if len(mono) == m + 1:
            y = Simplex(m, (), x.base)
        else:
            y = self.base_face(x.base, m, mono)
        tau = surjection(y.dim, y.degens)
        return Simplex(len(op) - 1, degens_of(tuple(tau[t] for t in epi)), y.base)

    def face(self, x, i):
        return self.apply(x, face_op(x.dim, i))

    def degeneracy(self, x, i):
        return self.apply(x, degeneracy_op(x.dim, i))

    def all_simplices(self, n):
        """Every simplex of dimension ``n`` (finite spaces only)."""
        out = []
        for m in range(n + 1):
            for b in self.nondegenerate(m):
                for degs in combinations(range(n), n - m):
                    out.append(Simplex(n, tuple(sorted(degs, reverse=True)), b.base))
        return out

    def check_identities(self, max_dim, probes=None):
        """Check ``d_i d_j = d_{j-1} d_i`` (i < j) and the degeneracy identities.

        Returns the first violating ``(identity, simplex)`` or None.
        """
        for n in range(1, max_dim + 1):
            xs = probes(n) if probes else self.all_simplices(n)
            for x in xs:
                for j in range(n + 1):
                    for i in range(j):
                        if n >= 2 and self.face(self.face(x, j), i) != self.face(self.face(x, i), j - 1):
                            return ("d_i d_j = d_{j-1} d_i", x, i, j)
                for i in range(n + 1):
                    if self.face(self.degeneracy(x, i), i) != x or self.face(self.degeneracy(x, i), i + 1) != x:
                        return ("d_i s_i = d_{i+1} s_i = id", x, i)
                    for j in range(i + 1, n + 1):
                        if self.degeneracy(self.degeneracy(x, j), i) != self.degeneracy(self.degeneracy(x, i), j + 1):
                            return ("s_i s_j = s_{j+1} s_i", x, i, j)
        return None


class RawSpace(LESpace):
    """Space whose simplices have a direct encoding with computable normal form.

    Subclasses implement ``raw_apply(raw, op)`` and ``normalize(raw, n)``.
    """

    def base_face(self, b, dim, mono):
        return self.normalize(self.raw_apply(b, mono), len(mono) - 1)

    def raw(self, x):
        return self.raw_apply(x.base, surjection(x.dim, x.degens)) if x.degens else x.base

    def from_raw(self, raw, n):
        return self.normalize(raw, n)


class FiniteSpace(LESpace):
    """Finite simplicial set given by nondegenerate simplices and a face table.

    ``faces[name][i]`` is the normal-form simplex ``d_i name``.
    """

    finite = True

    def __init__(self, dims, faces, name=None, check=True):
        self.dims = {int(n): list(v) for n, v in dims.items()}
        self.dim_of = {}
        for n, names in self.dims.items():
            for s in names:
                if s in self.dim_of:
                    raise ParseError(f"duplicate simplex {s!r}")
                self.dim_of[s] = n
        self.faces = {s: tuple(v) for s, v in faces.items()}
        self.name = name
        self.max_dim = max((n for n, v in self.dims.items() if v), default=-1)
        if check:
            self.audit()

    def audit(self):
        for s, n in self.dim_of.items():
            if n == 0:
                continue
            fs = self.faces.get(s)
            if fs is None or len(fs) != n + 1:
                raise AuditError("face table", s)
            for f in fs:
                if f.dim != n - 1 or f.base not in self.dim_of or \
                        self.dim_of[f.base] != f.dim - len(f.degens):
                    raise AuditError("face typing", (s, f))
        bad = self.check_identities(self.max_dim)
        if bad:
            raise AuditError("simplicial identity", bad)

    def base_face(self, b, dim, mono):
        missing = [v for v in range(dim + 1) if v not in mono]
        v = missing[-1]
        y = self.faces[b][v]
        if len(missing) == 1:
            return y
        rest = tuple(t if t < v else t - 1 for t in mono)
        return self.apply(y, rest)

    def nondegenerate(self, n):
        return [nondeg(n, s) for s in self.dims.get(n, [])]

    @classmethod
    def from_json(cls, obj, name=None):
        try:
            dims = {int(n): list(v) for n, v in obj["dims"].items()}
            dim_of = {s: n for n, v in dims.items() for s in v}
            faces = {}
            for s, fs in obj.get("faces", {}).items():
                out = []
                for i, f in enumerate(fs):
                    if isinstance(f, str):
                        f = {"base": f, "degens": []}
                    degs = tuple(sorted(f.get("degens", []), reverse=True))
                    out.append(Simplex(dim_of[s] - 1, degs, f["base"]))
                faces[s] = out
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed finite space: {exc}") from exc
        return cls(dims, faces, name=name or obj.get("name"))

    def to_json(self):
        return {
            "dims": {str(n): list(v) for n, v in sorted(self.dims.items())},
            "faces": {s: [{"base": f.base, "degens": sorted(f.degens)} for f in fs]
                      for s, fs in self.faces.items()},
        }


def empty_space():
    return FiniteSpace({}, {}, name="empty")


def point():
    return FiniteSpace({0: ["*"]}, {}, name="pt")


def minimal_sphere(n):
    """``S^n`` with one vertex and one nondegenerate ``n``-simplex."""
    if n == 0:
        return FiniteSpace({0: ["v", "w"]}, {}, name="S0")
    base = Simplex(n - 1, tuple(range(n - 2, -1, -1)), "v")
    return FiniteSpace({0: ["v"], n: ["e"]}, {"e": [base] * (n + 1)}, name=f"S{n}")


class StandardSimplex(RawSpace):
    """``Delta^n``; simplices are weakly increasing vertex tuples."""

    finite = True

    def __init__(self, n):
        self.n = n
        self.name = f"Delta{n}"

    def raw_apply(self, raw, op):
        return tuple(raw[t] for t in op)

    def normalize(self, raw, n):
        degs = tuple(t for t in range(len(raw) - 2, -1, -1) if raw[t] == raw[t + 1])
        base = tuple(sorted(set(raw)))
        return Simplex(n, degs, base)

    def nondegenerate(self, m):
        return [nondeg(m, c) for c in combinations(range(self.n + 1), m + 1)]

    def top(self):
        return nondeg(self.n, tuple(range(self.n + 1)))


def boundary_of_simplex(n):
    return Skeleton(StandardSimplex(n), n - 1)


class Skeleton(LESpace):
    """Simplices of ``X`` whose nondegenerate part has dimension ``<= k``."""

    def __init__(self, X, k):
        self.X = X
        self.k = k
        self.finite = X.finite
        self.name = f"sk{k}({X.name})"

    def base_face(self, b, dim, mono):
        return self.X.base_face(b, dim, mono)

    def nondegenerate(self, n):
        return self.X.nondegenerate(n) if n <= self.k else []

    def sample(self, n, rng):
        return self.X.sample(n, rng) if n <= self.k else None


def skeleton(X, k):
    if k < 0:
        raise ValueError("skeleton index must be >= 0")
    return Skeleton(X, k)


class ProductSpace(LESpace):
    """``X x Y``; nondegenerate bases are pairs without common degeneracy."""

    def __init__(self, X, Y):
        self.X, self.Y = X, Y
        self.finite = X.finite and Y.finite
        self.name = f"({X.name} x {Y.name})"

    def base_face(self, b, dim, mono):
        x, y = b
        return normalize_pair(self.X.apply(x, mono), self.Y.apply(y, mono))

    def nondegenerate(self, n):
        return [nondeg(n, pair) for pair in nondegenerate_pairs(self.X, self.Y, n)]

    def sample(self, n, rng):
        for _ in range(20):
            p = rng.randrange(n + 1)
            q = rng.randrange(n - p, n + 1)
            a, b = self.X.sample(p, rng), self.Y.sample(q, rng)
            if a is None or b is None:
                continue
            positions = list(range(n))
            ex = set(rng.sample(positions, n - p))
            free = [t for t in positions if t not in ex]
            if len(free) < n - q:
                continue
            ey = set(rng.sample(free, n - q))
            x = Simplex(n, tuple(sorted(ex, reverse=True)), a.base)
            y = Simplex(n, tuple(sorted(ey, reverse=True)), b.base)
            return nondeg(n, (x, y))
        return None


def nondegenerate_pairs(X, Y, n):
    out = []
    for p in range(n + 1):
        for a in X.nondegenerate(p):
            for ex in combinations(range(n), n - p):
                free = [t for t in range(n) if t not in ex]
                for q in range(n - len(free), n + 1):
                    if q < 0:
                        continue
                    for ey in combinations(free, n - q):
                        for b in Y.nondegenerate(q):
                            out.append((Simplex(n, tuple(sorted(ex, reverse=True)), a.base),
                                        Simplex(n, tuple(sorted(ey, reverse=True)), b.base)))
    return out


def product(X, Y):
    return ProductSpace(X, Y)


class Nerve(RawSpace):
    """Nerve of a finite category; raw simplices are ``(i0, (f1, ..., fq))``."""

    def __init__(self, category):
        self.category = category
        self.name = f"N({category.name})"
        self.finite = False

    def vertices(self, raw):
        i0, fs = raw
        out = [i0]
        for f in fs:
            out.append(self.category.cod(f))
        return out

    def raw_apply(self, raw, op):
        C = self.category
        verts = self.vertices(raw)
        fs = raw[1]
        out = []
        for a, b in zip(op, op[1:]):
            m = C.identity(verts[a])
            for k in range(a, b):
                m = C.compose(fs[k], m)
            out.append(m)
        return (verts[op[0]], tuple(out))

    def normalize(self, raw, n):
        i0, fs = raw
        C = self.category
        degs = tuple(t for t in range(len(fs) - 1, -1, -1) if C.is_identity(fs[t]))
        base = (i0, tuple(f for f in fs if not C.is_identity(f)))
        return Simplex(n, degs, base)

    def nondegenerate(self, n):
        return [nondeg(n, c) for c in self.category.nondegenerate_chains(n)]

    def sample(self, n, rng):
        chains = self.category.nondegenerate_chains(n)
        return nondeg(n, rng.choice(chains)) if chains else None


def nerve(category):
    return Nerve(category)


class SimplicialMap:
    """Simplicial map given on nondegenerate simplices (``fn(b, dim) -> Simplex``)."""

    def __init__(self, source, target, fn, name=None):
        self.source, self.target = source, target
        self.fn = fn
        self.name = name
        self._cache = {}

    def __call__(self, x):
        key = (x.dim - len(x.degens), x.base)
        y = self._cache.get(key)
        if y is None:
            y = self.fn(x.base, key[0])
            self._cache[key] = y
        if not x.degens:
            return y
        return self.target.apply(y, surjection(x.dim, x.degens))

    def check(self, max_dim, probes=None):
        """First simplex where the map fails to commute with a face (or None)."""
        for n in range(1, max_dim + 1):
            xs = probes(n) if probes else self.source.nondegenerate(n)
            for x in xs:
                fx = self(x)
                for i in range(n + 1):
                    if self(self.source.face(x, i)) != self.target.face(fx, i):
                        return (x, i)
        return None

    @classmethod
    def identity(cls, X):
        return cls(X, X, lambda b, m: nondeg(m, b), name="id")

    @classmethod
    def to_point(cls, X, P=None):
        P = P or point()
        return cls(X, P, lambda b, m: Simplex(m, tuple(range(m - 1, -1, -1)), "*"), name="const")

    @classmethod
    def from_table(cls, X, Y, table):
        """Map of finite spaces from images of nondegenerate simplices."""
        return cls(X, Y, lambda b, m: table[b], name="table")

    def compose(self, other):
        """``self o other``."""
        return SimplicialMap(other.source, self.target, lambda b, m: self(other(nondeg(m, b))))


# normalized chains and the Eilenberg-Zilber maps

def normalized_chains(X):
    """``C_*(X)``: nondegenerate simplices, alternating face sums (degenerate faces dropped)."""
    def d(n, x):
        out = {}
        for i in range(n + 1):
            y = X.face(x, i)
            if not y.degens:
                out[y] = out.get(y, 0) + (-1 if i % 2 else 1)
        return {k: v for k, v in out.items() if v}

    basis = (lambda n: X.nondegenerate(n)) if X.finite else None
    return ChainComplex(d, basis, name=f"C({X.name})", sample=lambda n, rng: X.sample(n, rng))


def chain_map_of(f):
    """``C_*(f)`` for a simplicial map."""
    def fn(n, x):
        y = f(x)
        return {} if y.degens else {y: 1}
    return LinearMap(fn, 0, name=f"C({f.name})")


def shuffles(p, q):
    """``(p, q)``-shuffles ``(alpha, beta)`` with their signs."""
    out = []
    for alpha in combinations(range(p + q), p):
        aset = set(alpha)
        beta = tuple(t for t in range(p + q) if t not in aset)
        sign = sum(a - i for i, a in enumerate(alpha))
        out.append((alpha, beta, -1 if sign % 2 else 1))
    return out


def _degenerate_by(space, x, positions):
    """``s_{positions[-1]} ... s_{positions[0]} x`` (first position applied first)."""
    for j in positions:
        x = space.degeneracy(x, j)
    return x


def _faces_by(space, x, positions):
    """``d_{positions[0]} ... d_{positions[-1]} x`` (last applied first)."""
    for j in reversed(positions):
        x = space.face(x, j)
    return x


def aw_terms(X, Y, x, y):
    """Alexander-Whitney on the pair ``(x, y)`` of ``n``-simplices: tensor terms ``{(i, a, b): c}``."""
    n = x.dim
    out = {}
    for i in range(n + 1):
        a = X.apply(x, tuple(range(i + 1)))
        if a.degens:
            continue
        b = Y.apply(y, tuple(range(i, n + 1)))
        if b.degens:
            continue
        out[(i, a, b)] = out.get((i, a, b), 0) + 1
    return out


def eml_terms(X, Y, a, b):
    """Shuffle map on ``a (x) b``: nondegenerate product simplices ``{pair: c}``."""
    p, q = a.dim, b.dim
    out = {}
    for alpha, beta, sign in shuffles(p, q):
        x = _degenerate_by(X, a, beta)
        y = _degenerate_by(Y, b, alpha)
        s = normalize_pair(x, y)
        if not s.degens:
            out[s] = out.get(s, 0) + sign
    return {k: v for k, v in out.items() if v}


def shi_terms(X, Y, x, y):
    """Explicit Eilenberg-Zilber homotopy on the pair ``(x, y)`` of ``m``-simplices."""
    m = x.dim
    out = {}
    for q in range(m):
        for p in range(m - q):
            fx = _faces_by(X, x, list(range(m - q + 1, m + 1)))
            fx = X.degeneracy(fx, m - p - q - 1)
            fy = _faces_by(Y, y, list(range(m - p - q, m - q)))
            for alpha, beta, sign in shuffles(p + 1, q):
                xx = _degenerate_by(X, fx, [bt + m - p - q for bt in beta])
                yy = _degenerate_by(Y, fy, [al + m - p - q for al in alpha])
                s = normalize_pair(xx, yy)
                if s.degens:
                    continue
                e = sign * (-1 if (m - p - q) % 2 else 1)
                out[s] = out.get(s, 0) + e
    return {k: v for k, v in out.items() if v}


def ez_reduction(X, Y):
    """Eilenberg-Zilber reduction ``C(X x Y) => C(X) (x) C(Y)`` (AW, shuffle, homotopy)."""
    P = ProductSpace(X, Y)
    top = normalized_chains(P)
    bottom = tensor(normalized_chains(X), normalized_chains(Y))

    def alpha(n, s):
        x, y = s.base
        return aw_terms(X, Y, x, y)

    def beta(n, key):
        _, a, b = key
        return eml_terms(X, Y, a, b)

    def eta(n, s):
        x, y = s.base
        return shi_terms(X, Y, x, y)

    return Reduction(top, bottom, LinearMap(alpha, 0, name="AW"), LinearMap(beta, 0, name="EML"),
                     LinearMap(eta, 1, name="SHI"))
