"""Exact integer linear algebra and fully effective abelian groups.

Every finitely generated abelian group is handled in invariant-factor form
``Z/q_1 + ... + Z/q_r`` with ``q_1 | q_2 | ...`` and the free summands
(``q = 0``) last.  Elements are integer coordinate vectors; the decision
algorithm reduces any integer vector to its canonical representative.

Subgroups and quotients (kernels, cokernels, Hom-groups) are returned as
:class:`Subquotient` instances which remember how their generators sit in an
ambient lattice ``Z^r`` and can decide ambient vectors back into coordinates.
"""

from math import gcd

from .errors import AuditError


class IntMatrix:
    """Dense integer matrix with exact (Python int) entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, rows=None, cols=None):
        data = [list(map(int, r)) for r in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("inconsistent matrix dimensions")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns, rows):
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return IntMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         self.cols, self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            ot = other.transpose().data
            return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in ot] for r in self.data],
                             self.rows, other.cols)
        return [sum(a * b for a, b in zip(r, other)) for r in self.data]

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self.data))))

    def is_zero(self):
        return all(x == 0 for r in self.data for x in r)

    def tolist(self):
        return [list(r) for r in self.data]

    def __repr__(self):
        return f"IntMatrix({self.data!r}, {self.rows}, {self.cols})"


def _snf_full(M):
    """Smith normal form with both transforms and their inverses.

    Returns ``(S, U, Uinv, V, Vinv)`` with ``U M V = S``.
    """
    m, n = M.rows, M.cols
    A = [list(r) for r in M.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(a, b):
        if a != b:
            A[a], A[b] = A[b], A[a]
            U[a], U[b] = U[b], U[a]
            for r in Ui:
                r[a], r[b] = r[b], r[a]

    def swap_cols(a, b):
        if a != b:
            for r in A:
                r[a], r[b] = r[b], r[a]
            for r in V:
                r[a], r[b] = r[b], r[a]
            Vi[a], Vi[b] = Vi[b], Vi[a]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ra, rs = A[dst], A[src]
        for k in range(n):
            ra[k] += q * rs[k]
        ua, us = U[dst], U[src]
        for k in range(m):
            ua[k] += q * us[k]
        for r in Ui:
            r[src] -= q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        va, vs = Vi[src], Vi[dst]
        for k in range(n):
            va[k] -= q * vs[k]

    def negate_row(a):
        A[a] = [-x for x in A[a]]
        U[a] = [-x for x in U[a]]
        for r in Ui:
            r[a] = -r[a]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                # a remainder smaller than the pivot survived; move it to (t, t)
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, t)
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), t, j)
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    return (IntMatrix(A, m, n), IntMatrix(U, m, m), IntMatrix(Ui, m, m),
            IntMatrix(V, n, n), IntMatrix(Vi, n, n))


def smith_normal_form(M):
    """Return ``(S, U, V)`` with ``U @ M @ V == S``.

    ``S`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``; ``U`` and
    ``V`` are unimodular.  The pivot is always an entry of minimal absolute
    value in the remaining block.
    """
    if not isinstance(M, IntMatrix):
        M = IntMatrix(M)
    S, U, _, V, _ = _snf_full(M)
    return S, U, V


def invariant_factors(M):
    """Nonzero diagonal of the Smith normal form."""
    S = smith_normal_form(M)[0]
    return [S[i, i] for i in range(min(S.rows, S.cols)) if S[i, i]]


def kernel_basis(M):
    """Z-basis (list of column vectors) of ``{x : M x = 0}``."""
    if not isinstance(M, IntMatrix):
        M = IntMatrix(M)
    S, _, _, V, _ = _snf_full(M)
    rank = sum(1 for i in range(min(S.rows, S.cols)) if S[i, i])
    return [V.column(j) for j in range(rank, M.cols)]


class _Lattice:
    """A sublattice of ``Z^r`` given by spanning vectors, with exact coordinates."""

    def __init__(self, gens, dim):
        self.dim = dim
        gens = [list(g) for g in gens if any(g)]
        if not gens or dim == 0:
            self.basis = []
            self._U = None
            self._d = []
            return
        G = IntMatrix.from_columns(gens, dim)
        S, U, Ui, _, _ = _snf_full(G)
        d = [S[i, i] for i in range(min(S.rows, S.cols)) if S[i, i]]
        self._U = U
        self._d = d
        self.basis = [[Ui[k, i] * d[i] for k in range(dim)] for i in range(len(d))]

    @property
    def rank(self):
        return len(self.basis)

    def coords(self, v):
        """Coordinates of ``v`` in :attr:`basis`; raises ValueError if ``v`` is outside."""
        if self._U is None:
            if any(v):
                raise ValueError("vector not in lattice")
            return []
        w = self._U @ list(v)
        out = []
        for i, di in enumerate(self._d):
            q, r = divmod(w[i], di)
            if r:
                raise ValueError("vector not in lattice")
            out.append(q)
        if any(w[len(self._d):]):
            raise ValueError("vector not in lattice")
        return out


class FEAbGroup:
    """Fully effective abelian group ``Z/q_1 + ... + Z/q_r`` (``Z/0 = Z``).

    Orders must already be in invariant-factor form: torsion orders ascending
    along the divisibility chain, free summands last.
    """

    def __init__(self, orders=(), labels=None):
        orders = tuple(int(q) for q in orders)
        for q in orders:
            if q == 1 or q < 0:
                raise ValueError(f"invalid order {q}")
        tors = [q for q in orders if q]
        if orders != tuple(tors) + (0,) * (len(orders) - len(tors)):
            raise ValueError("free summands must come last")
        for a, b in zip(tors, tors[1:]):
            if b % a:
                raise ValueError("torsion orders must form a divisibility chain")
        self.orders = orders
        self.labels = tuple(labels) if labels is not None else tuple(f"a{i}" for i in range(len(orders)))

    @classmethod
    def from_orders(cls, orders):
        """Invariant-factor form of an arbitrary direct sum of cyclic groups."""
        S = smith_normal_form(IntMatrix([[int(i == j) * q for j in range(len(orders))]
                                         for i, q in enumerate(orders)], len(orders), len(orders)))[0]
        diag = [S[i, i] for i in range(len(orders))]
        return cls([q for q in diag if q != 1])

    @property
    def ngens(self):
        return len(self.orders)

    @property
    def free_rank(self):
        return sum(1 for q in self.orders if q == 0)

    @property
    def torsion(self):
        return tuple(q for q in self.orders if q)

    def is_trivial(self):
        return not self.orders

    def is_finite(self):
        return self.free_rank == 0

    def cardinality(self):
        out = 1
        for q in self.orders:
            if q == 0:
                return None
            out *= q
        return out

    def decide(self, v):
        if len(v) != self.ngens:
            raise ValueError("wrong element length")
        return tuple(x % q if q else x for x, q in zip(v, self.orders))

    def zero(self):
        return (0,) * self.ngens

    def add(self, a, b):
        return self.decide([x + y for x, y in zip(a, b)])

    def neg(self, a):
        return self.decide([-x for x in a])

    def scale(self, k, a):
        return self.decide([k * x for x in a])

    def generator(self, i):
        return tuple(int(j == i) for j in range(self.ngens))

    def elements(self):
        """All elements of a finite group (lexicographic order)."""
        if not self.is_finite():
            raise ValueError("infinite group")
        out = [()]
        for q in self.orders:
            out = [e + (x,) for e in out for x in range(q)]
        return out

    def is_isomorphic(self, other):
        return self.orders == other.orders

    def __eq__(self, other):
        return isinstance(other, FEAbGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    def __str__(self):
        if not self.orders:
            return "0"
        return " + ".join("Z" if q == 0 else f"Z/{q}" for q in self.orders)

    def __repr__(self):
        return f"FEAbGroup({list(self.orders)})"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj):
        orders = list(obj.get("torsion", [])) + [0] * int(obj.get("free_rank", 0))
        return cls.from_orders(orders)


Z = FEAbGroup([0])
TRIVIAL = FEAbGroup([])


def cyclic(q):
    return FEAbGroup([]) if q == 1 else FEAbGroup([q])


def direct_sum_groups(groups):
    """Direct sum as a group with concatenated (non-canonical) orders.

    Used internally as an ambient: elements are concatenated coordinate vectors.
    """
    return _Ambient([q for G in groups for q in G.orders])


class _Ambient(FEAbGroup):
    """Direct sum of cyclic groups without the invariant-factor normalization."""

    def __init__(self, orders):
        self.orders = tuple(int(q) for q in orders)
        self.labels = tuple(f"a{i}" for i in range(len(self.orders)))


class Subquotient(FEAbGroup):
    """Group ``L / N`` for lattices ``N <= L <= Z^r``.

    ``reps[i]`` is an ambient representative of the i-th generator and
    :meth:`from_ambient` is the decision algorithm for ambient vectors in ``L``.
    """

    def __init__(self, gens, rels, dim):
        lat = _Lattice(gens, dim)
        rel_coords = [lat.coords(r) for r in rels if any(r)]
        rank = lat.rank
        if rank and rel_coords:
            R = IntMatrix.from_columns(rel_coords, rank)
            S, P, Pinv, _, _ = _snf_full(R)
            diag = [S[i, i] if i < min(S.rows, S.cols) else 0 for i in range(rank)]
        else:
            P = Pinv = IntMatrix.identity(rank)
            diag = [0] * rank
        keep = [i for i in range(rank) if diag[i] != 1]
        super().__init__([diag[i] for i in keep])
        self.dim = dim
        self._lat = lat
        self._P = P
        self._keep = keep
        self.reps = []
        for i in keep:
            col = Pinv.column(i)
            self.reps.append([sum(b[k] * col[j] for j, b in enumerate(lat.basis)) for k in range(dim)])

    def from_ambient(self, v):
        c = self._lat.coords(v)
        z = self._P @ c if c else []
        return self.decide([z[i] for i in self._keep])

    def to_ambient(self, x):
        out = [0] * self.dim
        for coef, rep in zip(x, self.reps):
            if coef:
                for k in range(self.dim):
                    out[k] += coef * rep[k]
        return out

    def contains(self, v):
        try:
            self._lat.coords(v)
        except ValueError:
            return False
        return True


class ComputableHom:
    """Homomorphism given by the images of the domain generators (matrix columns)."""

    def __init__(self, domain, codomain, matrix, check=True):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(matrix, codomain.ngens, domain.ngens)
        if matrix.rows != codomain.ngens or matrix.cols != domain.ngens:
            raise ValueError("matrix shape does not match groups")
        data = [[x % q if q else x for x in row] for row, q in zip(matrix.data, codomain.orders)]
        self.domain = domain
        self.codomain = codomain
        self.matrix = IntMatrix(data, matrix.rows, matrix.cols)
        if check:
            for j, qa in enumerate(domain.orders):
                if qa and any(qa * self.matrix[i, j] % qb if qb else qa * self.matrix[i, j]
                              for i, qb in enumerate(codomain.orders)):
                    raise AuditError("hom well-definedness", (j, qa))

    def __call__(self, v):
        return self.codomain.decide(self.matrix @ list(v))

    def compose(self, other):
        """``self o other``."""
        return ComputableHom(other.domain, self.codomain, self.matrix @ other.matrix, check=False)

    def __add__(self, other):
        return ComputableHom(self.domain, self.codomain,
                             [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix.data, other.matrix.data)],
                             check=False)

    def __neg__(self):
        return ComputableHom(self.domain, self.codomain, [[-a for a in r] for r in self.matrix.data],
                             check=False)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return self.matrix.is_zero()

    def __eq__(self, other):
        return (isinstance(other, ComputableHom) and self.domain == other.domain
                and self.codomain == other.codomain and self.matrix == other.matrix)

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"ComputableHom({self.domain} -> {self.codomain}, {self.matrix.data})"

    @classmethod
    def identity(cls, G):
        return cls(G, G, IntMatrix.identity(G.ngens).data if G.ngens else IntMatrix.zeros(0, 0), check=False)

    @classmethod
    def zero(cls, A, B):
        return cls(A, B, IntMatrix.zeros(B.ngens, A.ngens), check=False)


def kernel(f):
    """Kernel of ``f`` as ``(K, incl)``; ``K.from_ambient`` decides elements of ker f."""
    A, B = f.domain, f.codomain
    n, m = A.ngens, B.ngens
    M = IntMatrix([f.matrix.data[i] + [-(q if k == i else 0) for k, q in enumerate(B.orders)]
                   for i in range(m)], m, n + m)
    if m:
        gens = [v[:n] for v in kernel_basis(M)]
    else:
        gens = [[int(i == j) for i in range(n)] for j in range(n)]
    rels = [[q if i == j else 0 for i in range(n)] for j, q in enumerate(A.orders) if q]
    K = Subquotient(gens, rels, n)
    incl = ComputableHom(K, A, IntMatrix.from_columns(K.reps, n) if K.ngens else IntMatrix.zeros(n, 0),
                         check=False)
    return K, incl


def cokernel(f):
    """Cokernel of ``f`` as ``(C, proj)``."""
    B = f.codomain
    m = B.ngens
    gens = [[int(i == j) for i in range(m)] for j in range(m)]
    rels = f.matrix.columns() + [[q if i == j else 0 for i in range(m)] for j, q in enumerate(B.orders) if q]
    C = Subquotient(gens, rels, m)
    proj = ComputableHom(B, C, IntMatrix.from_columns([C.from_ambient(g) for g in gens], C.ngens)
                         if m else IntMatrix.zeros(C.ngens, 0), check=False)
    return C, proj


def image_in(f, K):
    """Corestrict ``f`` to a subquotient ``K`` containing its image."""
    cols = [K.from_ambient(f(f.domain.generator(j))) for j in range(f.domain.ngens)]
    return ComputableHom(f.domain, K, IntMatrix.from_columns(cols, K.ngens) if cols
                         else IntMatrix.zeros(K.ngens, 0), check=False)


def homology_at(incoming, outgoing):
    """``ker(outgoing) / im(incoming)`` for composable homs with zero composite."""
    K, incl = kernel(outgoing)
    h = image_in(incoming, K)
    C, proj = cokernel(h)
    return C, K, incl, proj


def _hom_entry_generator(a, b):
    """Generator of ``{m in Z : a*m = 0 in Z/b}``."""
    if a == 0:
        return 1
    if b == 0:
        return 0
    return b // gcd(a, b)


class HomGroup(Subquotient):
    """``Hom`` group whose elements decode to families of :class:`ComputableHom`.

    Ambient vectors concatenate the row-major matrices of the blocks
    ``Hom(src[k], dst[k])``.
    """

    def __init__(self, blocks, gens, rels, dim):
        super().__init__(gens, rels, dim)
        self.blocks = blocks

    def decode(self, x):
        v = self.to_ambient(x)
        out = {}
        pos = 0
        for key, A, B in self.blocks:
            size = A.ngens * B.ngens
            flat = v[pos:pos + size]
            pos += size
            out[key] = ComputableHom(A, B, [flat[r * A.ngens:(r + 1) * A.ngens] for r in range(B.ngens)]
                                     if B.ngens else IntMatrix.zeros(0, A.ngens), check=False)
        return out

    def encode(self, family):
        v = []
        for key, A, B in self.blocks:
            for row in family[key].matrix.data:
                v.extend(row)
        return self.from_ambient(v)


def _block_lattice(blocks):
    gens, rels = [], []
    dim = sum(A.ngens * B.ngens for _, A, B in blocks)
    pos = 0
    for _, A, B in blocks:
        for r, qb in enumerate(B.orders):
            for c, qa in enumerate(A.orders):
                idx = pos + r * A.ngens + c
                g = _hom_entry_generator(qa, qb)
                if g:
                    gens.append([g if k == idx else 0 for k in range(dim)])
                if qb:
                    rels.append([qb if k == idx else 0 for k in range(dim)])
        pos += A.ngens * B.ngens
    return gens, rels, dim


def hom_group(A, B):
    """``Hom(A, B)`` as a fully effective group."""
    blocks = [(None, A, B)]
    gens, rels, dim = _block_lattice(blocks)
    return HomGroup(blocks, gens, rels, dim)


class FEAbDiagram:
    """Functor from a finite category to fully effective abelian groups."""

    def __init__(self, category, groups, homs, check=True):
        self.category = category
        self.groups = dict(groups)
        self.homs = {}
        for f in category.morphisms:
            if f in homs:
                self.homs[f] = homs[f]
            elif category.is_identity(f):
                self.homs[f] = ComputableHom.identity(self.groups[category.dom(f)])
            else:
                raise AuditError("missing morphism assignment", f)
        if check:
            self.audit()

    def audit(self):
        cat = self.category
        for f in cat.morphisms:
            h = self.homs[f]
            if h.domain.orders != self.groups[cat.dom(f)].orders or \
                    h.codomain.orders != self.groups[cat.cod(f)].orders:
                raise AuditError("diagram arrow typing", f)
            if cat.is_identity(f) and h != ComputableHom.identity(self.groups[cat.dom(f)]):
                raise AuditError("identity preservation", f)
        for (g, f), gf in cat.compose_table.items():
            if self.homs[g].compose(self.homs[f]).matrix != self.homs[gf].matrix:
                raise AuditError("functoriality", (g, f, gf))

    def __call__(self, x):
        return self.groups[x] if x in self.groups else self.homs[x]

    @classmethod
    def constant(cls, category, G):
        return cls(category, {o: G for o in category.objects},
                   {f: ComputableHom.identity(G) for f in category.morphisms})

    def is_zero(self):
        return all(G.is_trivial() for G in self.groups.values())


def hom_diagram(pi, rho):
    """Group of natural transformations ``pi -> rho``, computed as ``Ker F``.

    ``F(g) = (rho(f) g(i) - g(i') pi(f))`` over the non-identity arrows ``f: i -> i'``.
    """
    cat = pi.category
    blocks = [(o, pi.groups[o], rho.groups[o]) for o in cat.objects]
    gens, rels, dim = _block_lattice(blocks)
    offsets = {}
    pos = 0
    for o, A, B in blocks:
        offsets[o] = pos
        pos += A.ngens * B.ngens

    # F as an integer matrix on ambient vectors; each arrow contributes a block of rows.
    rows, row_orders = [], []
    for f in cat.morphisms:
        if cat.is_identity(f):
            continue
        i, j = cat.dom(f), cat.cod(f)
        A, B = pi.groups[i], rho.groups[j]
        rf, pf = rho.homs[f].matrix, pi.homs[f].matrix
        Bi = rho.groups[i]
        Aj = pi.groups[j]
        for r in range(B.ngens):
            for c in range(A.ngens):
                row = [0] * dim
                # (rho(f) g(i))[r, c] = sum_k rf[r, k] g_i[k, c]
                for k in range(Bi.ngens):
                    row[offsets[i] + k * A.ngens + c] += rf[r, k]
                # (g(j) pi(f))[r, c] = sum_k g_j[r, k] pf[k, c]
                for k in range(Aj.ngens):
                    row[offsets[j] + r * Aj.ngens + k] -= pf[k, c]
                rows.append(row)
                row_orders.append(B.orders[r])
    if rows and gens:
        G0 = IntMatrix.from_columns(gens, dim)
        FG = IntMatrix(rows, len(rows), dim) @ G0
        M = IntMatrix([FG.data[r] + [-(q if k == r else 0) for k, q in enumerate(row_orders)]
                       for r in range(len(rows))], len(rows), len(gens) + len(rows))
        cs = [v[:len(gens)] for v in kernel_basis(M)]
        gens = [G0 @ c for c in cs]
    return HomGroup(blocks, gens, rels, dim)


def group_from_string(text):
    """Parse ``"Z + Z/2"``-style strings (``"0"`` is the trivial group)."""
    text = text.strip()
    if text in ("0", ""):
        return TRIVIAL
    orders = []
    for part in text.split("+"):
        part = part.strip()
        if part == "Z":
            orders.append(0)
        elif part.startswith("Z/"):
            orders.append(int(part[2:]))
        else:
            raise ValueError(f"cannot parse group summand {part!r}")
    return FEAbGroup.from_orders(orders)
