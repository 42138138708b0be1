"""Reductions, strong equivalences and the perturbation lemmas.

A reduction ``(alpha, beta, eta): top => bottom`` satisfies

    eta beta = 0,  alpha eta = 0,  alpha beta = id,  eta eta = 0,
    d eta + eta d = id - beta alpha.

Everything here works unchanged for diagrams of chain complexes: a diagram
is represented by its total complex (all objects at once) and naturality of
the maps is checked separately (see :mod:`effhom.diagcat`).
"""

import json
import random
from dataclasses import dataclass, field

from .chain import (Chain, ChainComplex, LinearMap, identity_map, zero_map, direct_sum,
                    tensor, tensor_maps, _add_into)
from .errors import ComplexMismatch, LocalFinitenessViolation, NonNilpotent


@dataclass(frozen=True)
class Reduction:
    top: ChainComplex
    bottom: ChainComplex
    alpha: LinearMap
    beta: LinearMap
    eta: LinearMap
    is_identity: bool = False


@dataclass(frozen=True)
class StrongEquivalence:
    """Span ``source <= hat => target`` of two reductions with common top."""

    left: Reduction
    right: Reduction

    @property
    def hat(self):
        return self.left.top

    @property
    def source(self):
        return self.left.bottom

    @property
    def target(self):
        return self.right.bottom


def identity_reduction(C):
    return Reduction(C, C, identity_map(), identity_map(), zero_map(1), is_identity=True)


def identity_equivalence(C):
    r = identity_reduction(C)
    return StrongEquivalence(r, r)


def equivalence_from_reduction(rho):
    """``top <= top => bottom`` with the identity on the left."""
    return StrongEquivalence(identity_reduction(rho.top), rho)


# verification

@dataclass
class ReductionReport:
    ok: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)

    def fail(self, identity, witness, value):
        self.ok = False
        self.failures.append({"identity": identity, "witness": repr(witness), "value": repr(value)})

    def to_json(self):
        return json.dumps({"ok": self.ok, "checked": self.checked, "failures": self.failures},
                          sort_keys=True)


def verify_reduction(rho, top_probes, bottom_probes, stop_at_first=True):
    """Evaluate the five reduction identities (and chain-map laws) on probes.

    Probes are :class:`Chain` instances.  Returns a :class:`ReductionReport`
    whose first failure carries the witness chain.
    """
    rep = ReductionReport()
    a, b, h = rho.alpha, rho.beta, rho.eta
    dt, db = rho.top.d, rho.bottom.d
    for c in bottom_probes:
        rep.checked += 1
        if h(b(c)):
            rep.fail("eta beta = 0", c, h(b(c)))
        if a(b(c)) != c:
            rep.fail("alpha beta = id", c, a(b(c)))
        if b(db(c)) != dt(b(c)):
            rep.fail("beta chain map", c, dt(b(c)) - b(db(c)))
        if stop_at_first and not rep.ok:
            return rep
    for c in top_probes:
        rep.checked += 1
        hc = h(c)
        if a(hc):
            rep.fail("alpha eta = 0", c, a(hc))
        if h(hc):
            rep.fail("eta eta = 0", c, h(hc))
        bac = b(a(c))
        lhs = dt(hc) + h(dt(c)) if c.degree > 0 else dt(hc)
        if lhs != c - bac:
            rep.fail("d eta + eta d = id - beta alpha", c, lhs - (c - bac))
        if a(dt(c)) != db(a(c)):
            rep.fail("alpha chain map", c, db(a(c)) - a(dt(c)))
        if stop_at_first and not rep.ok:
            return rep
    return rep


def exhaustive_probes(C, max_degree):
    return [Chain.gen(n, g) for n in range(max_degree + 1) for g in C.basis(n)]


def random_probes(C, max_degree, count, seed=0, max_terms=3):
    """Random small integer combinations of sampled generators."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count and attempts < 20 * count:
        attempts += 1
        n = rng.randrange(max_degree + 1)
        terms = {}
        for _ in range(rng.randrange(1, max_terms + 1)):
            g = C.sample(n, rng)
            if g is not None:
                terms[g] = terms.get(g, 0) + rng.choice((-2, -1, 1, 1, 2))
        ch = Chain(n, terms)
        if ch:
            out.append(ch)
    return out


def probes_for(C, max_degree, limit=200, count=1000, seed=0):
    """Exhaustive basis probes when the complex is small enough, random otherwise."""
    if C.is_effective:
        total = sum(len(C.basis(n)) for n in range(max_degree + 1))
        if total <= limit:
            return exhaustive_probes(C, max_degree)
    return random_probes(C, max_degree, count, seed)


def verify_reduction_auto(rho, max_degree, limit=200, count=1000, seed=0):
    return verify_reduction(rho, probes_for(rho.top, max_degree, limit, count, seed),
                            probes_for(rho.bottom, max_degree, limit, count, seed + 1))


def check_perturbation(C, delta, probes):
    """Return the first probe on which ``(d + delta)^2 != 0`` (or None)."""
    D = C.d + delta
    for c in probes:
        if D(D(c)):
            return c
    return None


# composition

def _same(a, b):
    return a is b


def compose_reductions(r1, r2, check=True):
    """``C => D => E`` gives ``C => E``: ``(a2 a1, b1 b2, e1 + b1 e2 a1)``."""
    if check and not _same(r1.bottom, r2.top):
        raise ComplexMismatch("bottom of the first reduction is not the top of the second")
    if r2.is_identity:
        return r1
    if r1.is_identity:
        return Reduction(r1.top, r2.bottom, r2.alpha, r2.beta, r2.eta)
    return Reduction(r1.top, r2.bottom, r2.alpha @ r1.alpha, r1.beta @ r2.beta,
                     r1.eta + r1.beta @ r2.eta @ r1.alpha)


def easy_perturbation(rho, delta_bottom):
    """Perturb the bottom differential; maps unchanged, top gets ``d + beta delta alpha``."""
    bottom = rho.bottom.with_differential(rho.bottom.d + delta_bottom)
    top = rho.top.with_differential(rho.top.d + rho.beta @ delta_bottom @ rho.alpha)
    return Reduction(top, bottom, rho.alpha, rho.beta, rho.eta)


def _series(first, second, bound):
    """``sum_i (-1)^i (first second)^i`` evaluated term by term until zero."""
    def fn(n, g):
        total = {}
        term = {g: 1}
        i = 0
        limit = bound(n) if callable(bound) else bound
        while term:
            _add_into(total, term)
            term = second.apply_terms(n, term)
            term = first.apply_terms(n + second.shift, term)
            term = {k: -v for k, v in term.items()}
            i += 1
            if i > limit:
                raise NonNilpotent(f"perturbation series did not vanish after {limit} terms on {g!r}")
        return total
    return LinearMap(fn, 0, name="series")


def default_bound(n):
    # 10 + degree + filtration depth (nerve filtration depth <= degree + 1)
    return 10 + n + (n + 1)


def basic_perturbation(rho, delta, bound=None):
    """Basic Perturbation Lemma for a perturbation ``delta`` of the top differential.

    With ``phi = sum (-1)^i (eta delta)^i`` and ``psi = sum (-1)^i (delta eta)^i``
    returns ``(alpha psi, phi beta, phi eta)`` between ``(top, d + delta)`` and
    ``(bottom, d' + alpha delta phi beta)``.  Raises :class:`NonNilpotent` when a
    series exceeds ``bound`` terms.
    """
    bound = bound or default_bound
    a, b, h = rho.alpha, rho.beta, rho.eta
    raw_delta = delta
    delta = LinearMap(lambda n, g: raw_delta.on_gen(n, g) if n > 0 else {}, -1, name="delta")
    phi = _series(h, delta, bound)
    psi = _series(delta, h, bound)
    delta_bottom = a @ delta @ phi @ b
    top = rho.top.with_differential(rho.top.d + delta)
    bottom = rho.bottom.with_differential(rho.bottom.d + delta_bottom)
    out = Reduction(top, bottom, a @ psi, phi @ b, phi @ h)
    object.__setattr__(out, "delta_bottom", delta_bottom)
    return out


def _tagged(tag, terms):
    return {(tag, g): c for g, c in terms.items()}


def compose_equivalences(e1, e2, check=True):
    """Compose ``C <= A => D`` and ``D <= B => E`` into ``C <= P => E``.

    ``P`` is the double mapping cylinder of ``beta1: D -> A`` and
    ``beta2: D -> B``: ``P_n = A_n + B_n + D_{n-1}`` with
    ``d(x) = beta1 x - beta2 x - dx`` on the ``D`` summand.  Its reductions
    to ``A`` and ``B`` come from the explicit contraction of a mapping cone
    followed by the Basic Perturbation Lemma.
    """
    if check and not _same(e1.target, e2.source):
        raise ComplexMismatch("target of the first equivalence is not the source of the second")
    r1, r2 = e1.right, e2.left
    if r2.is_identity:
        return StrongEquivalence(e1.left, compose_reductions(r1, e2.right, check=False))
    if r1.is_identity:
        return StrongEquivalence(compose_reductions(r2, e1.left, check=False), e2.right)
    A, B, D = r1.top, r2.top, r1.bottom

    def dP(n, tg):
        t, g = tg
        if t == "A":
            return _tagged("A", A.d.on_gen(n, g))
        if t == "B":
            return _tagged("B", B.d.on_gen(n, g))
        out = _tagged("A", r1.beta.on_gen(n - 1, g))
        out.update(_tagged("B", {k: -v for k, v in r2.beta.on_gen(n - 1, g).items()}))
        out.update(_tagged("D", {k: -v for k, v in D.d.on_gen(n - 1, g).items()}))
        return out

    basis = None
    if A.is_effective and B.is_effective and D.is_effective:
        def basis(n):
            return ([("A", g) for g in A.basis(n)] + [("B", g) for g in B.basis(n)]
                    + [("D", g) for g in D.basis(n - 1)])

    def sample(n, rng):
        t = rng.choice("ABD")
        if t == "D" and n == 0:
            return None
        g = {"A": A, "B": B, "D": D}[t].sample(n - (t == "D"), rng)
        return None if g is None else (t, g)
    P = ChainComplex(dP, basis, name="cylinder", sample=sample)
    to_A = _cylinder_reduction(P, "A", "B", r1, r2, keep_sign=1)
    to_B = _cylinder_reduction(P, "B", "A", r2, r1, keep_sign=-1)
    return StrongEquivalence(compose_reductions(to_A, e1.left, check=False),
                             compose_reductions(to_B, e2.right, check=False))


def _cylinder_reduction(P, keep, other, r_keep, r_other, keep_sign):
    """Reduction ``P => keep`` contracting the cone ``other + sD``.

    The cone of ``f = s beta: D -> other`` (``s = -keep_sign``) is contracted by
    ``(y, x) -> (eta y, s alpha y)``; the ``D -> keep`` part of the
    differential is then a perturbation.
    """
    base = r_keep.top
    s = -keep_sign

    def delta(n, tg):
        t, g = tg
        if t == "D":
            return _tagged(keep, {k: keep_sign * v for k, v in r_keep.beta.on_gen(n - 1, g).items()})
        return {}

    def d0(n, tg):
        out = dict(P.d.on_gen(n, tg))
        for k, v in delta(n, tg).items():
            _add_into(out, {k: -v})
        return out

    def h(n, tg):
        t, g = tg
        if t != other:
            return {}
        out = _tagged(other, r_other.eta.on_gen(n, g))
        out.update(_tagged("D", {k: s * v for k, v in r_other.alpha.on_gen(n, g).items()}))
        return out

    def alpha(n, tg):
        return {tg[1]: 1} if tg[0] == keep else {}

    P0 = P.with_differential(LinearMap(d0, -1))
    rho0 = Reduction(P0, base, LinearMap(alpha, 0), LinearMap(lambda n, g: {(keep, g): 1}, 0),
                     LinearMap(h, 1))
    pert = basic_perturbation(rho0, LinearMap(delta, -1))
    # the induced bottom perturbation vanishes, so the bottom is `base` itself
    return Reduction(P, base, pert.alpha, pert.beta, pert.eta)


def direct_sum_reductions(r1, r2):
    top, bottom = direct_sum(r1.top, r2.top), direct_sum(r1.bottom, r2.bottom)
    maps = []
    for name in ("alpha", "beta", "eta"):
        f1, f2 = getattr(r1, name), getattr(r2, name)

        def fn(n, tg, f1=f1, f2=f2):
            t, g = tg
            return _tagged(t, (f1, f2)[t].on_gen(n, g))
        maps.append(LinearMap(fn, f1.shift))
    return Reduction(top, bottom, *maps)


def tensor_reductions(r1, r2):
    """``C1 (x) C2 => D1 (x) D2`` with ``eta = eta1 (x) 1 + beta1 alpha1 (x) eta2``."""
    top, bottom = tensor(r1.top, r2.top), tensor(r1.bottom, r2.bottom)
    one = identity_map()
    eta = tensor_maps(r1.eta, one) + tensor_maps(r1.beta @ r1.alpha, r2.eta)
    return Reduction(top, bottom, tensor_maps(r1.alpha, r2.alpha), tensor_maps(r1.beta, r2.beta), eta)


def tag_equivalence(e, k):
    """Relabel every generator ``g`` of an equivalence as ``(k, g)``."""
    def tag_complex(C):
        basis = (lambda n: [(k, g) for g in C.basis(n)]) if C.is_effective else None

        def sample(n, rng):
            g = C.sample(n, rng)
            return None if g is None else (k, g)
        return ChainComplex(lambda n, tg: _tagged(k, C.d.on_gen(n, tg[1])), basis,
                            name=f"{k}:{C.name}", sample=sample)

    def tag_map(f):
        return LinearMap(lambda n, tg: _tagged(k, f.on_gen(n, tg[1])), f.shift)

    hat, src, tgt = tag_complex(e.hat), tag_complex(e.source), tag_complex(e.target)
    left = Reduction(hat, src, tag_map(e.left.alpha), tag_map(e.left.beta), tag_map(e.left.eta))
    right = Reduction(hat, tgt, tag_map(e.right.alpha), tag_map(e.right.beta), tag_map(e.right.eta))
    return StrongEquivalence(left, right)


class _Pieces:
    def __init__(self, pieces):
        self._pieces = pieces
        self._cache = {}

    def __call__(self, k):
        if k not in self._cache:
            if callable(self._pieces):
                self._cache[k] = self._pieces(k)
            else:
                self._cache[k] = self._pieces[k] if 0 <= k < len(self._pieces) else None
        return self._cache[k]


def filtered_assembly(pieces, delta, filtration, max_filtration=None, bound=None):
    """Effective homology of a filtered complex from that of its filtration quotients.

    ``pieces`` is a sequence (or ``k -> StrongEquivalence`` callable) giving
    ``G_k <= hat G_k => G_k^ef``; ``filtration(gen)`` returns the index ``k`` of
    any generator of any of these complexes.  ``delta`` is the perturbation
    of the summed differential on ``G = sum G_k``; it must strictly decrease
    the filtration index.  Returns the perturbed strong equivalence.
    """
    get = _Pieces(pieces)
    if max_filtration is None:
        max_filtration = (lambda n: len(pieces) - 1) if not callable(pieces) else (lambda n: n)

    def role_complex(role):
        def d(n, g):
            return role(get(filtration(g))).d.on_gen(n, g)

        def basis(n):
            out = []
            top = max_filtration(n)
            for k in range(top + 1):
                e = get(k)
                if e is not None:
                    out.extend(role(e).basis(n))
            extra = get(top + 1)
            if extra is not None and role(extra).is_effective and role(extra).basis(n):
                raise LocalFinitenessViolation(f"filtration stage {top + 1} meets degree {n}")
            return out

        effective = all(role(get(k)).is_effective for k in range(max_filtration(0) + 1)
                        if get(k) is not None)

        def sample(n, rng):
            k = rng.randrange(max_filtration(n) + 1)
            e = get(k)
            return None if e is None else role(e).sample(n, rng)
        return ChainComplex(d, basis if effective else None, name="G", sample=sample)

    def role_map(role):
        def fn(n, g):
            return role(get(filtration(g))).on_gen(n, g)
        shift = role(get(0)).shift
        return LinearMap(fn, shift)

    G = role_complex(lambda e: e.source)
    hat = role_complex(lambda e: e.hat)
    ef = role_complex(lambda e: e.target)
    left = Reduction(hat, G, role_map(lambda e: e.left.alpha), role_map(lambda e: e.left.beta),
                     role_map(lambda e: e.left.eta))
    right = Reduction(hat, ef, role_map(lambda e: e.right.alpha), role_map(lambda e: e.right.beta),
                      role_map(lambda e: e.right.eta))

    def strict(n, g):
        out = delta.on_gen(n, g)
        k = filtration(g)
        for h in out:
            if filtration(h) >= k:
                raise NonNilpotent(f"perturbation does not decrease filtration: {g!r} -> {h!r}")
        return out
    delta_checked = LinearMap(strict, -1)

    if left.is_identity:
        left_p = easy_perturbation(identity_reduction(G), delta_checked)
    else:
        left_p = easy_perturbation(left, delta_checked)
    delta_hat = left.beta @ delta_checked @ left.alpha
    right_p = basic_perturbation(right, delta_hat, bound)
    # both perturbed tops carry the same differential; share one object
    left_p = Reduction(right_p.top, left_p.bottom, left_p.alpha, left_p.beta, left_p.eta)
    out = StrongEquivalence(left_p, right_p)
    return out


def elementary_reduction(C, x, y, n):
    """Cancel the pair ``x`` (degree ``n+1``) and ``y`` (degree ``n``) of ``C``.

    Requires the incidence ``<dx, y>`` to be a unit.  The bottom complex has
    the same generators minus ``x, y`` and differential corrected through
    ``x``; ``eta(y) = e x`` with ``e = <dx, y>``.
    """
    e = C.d.on_gen(n + 1, x).get(y, 0)
    if e not in (1, -1):
        raise ComplexMismatch(f"incidence of {x!r} on {y!r} is {e}, not a unit")
    dx = C.d.on_gen(n + 1, x)
    rest_dx = {g: c for g, c in dx.items() if g != y}

    def dB(m, g):
        out = dict(C.d.on_gen(m, g))
        if m == n + 1:
            k = out.get(y, 0)
            if k:
                _add_into(out, dx, -e * k)
        out.pop(y, None)
        if m == n + 2:
            out.pop(x, None)
        return out

    def alpha(m, g):
        if m == n and g == y:
            return {h: -e * c for h, c in rest_dx.items()}
        if m == n + 1 and g == x:
            return {}
        return {g: 1}

    def beta(m, g):
        if m == n + 1:
            k = C.d.on_gen(m, g).get(y, 0)
            if k:
                return {g: 1, x: -e * k}
        return {g: 1}

    def eta(m, g):
        return {x: e} if (m == n and g == y) else {}

    basis = None
    if C.is_effective:
        def basis(m):
            drop = {n: y, n + 1: x}.get(m)
            return [g for g in C.basis(m) if g != drop]
    B = ChainComplex(dB, basis, name=C.name)
    return Reduction(C, B, LinearMap(alpha, 0), LinearMap(beta, 0), LinearMap(eta, 1))


def gauss_reduction(C, max_degree):
    """Reduce an effective complex by cancelling unit incidences up to ``max_degree``.

    The result is exact in degrees ``< max_degree``; generators of degree
    ``max_degree + 1`` are used only as cancellation partners.
    """
    rho = identity_reduction(C)
    cur = C
    changed = True
    while changed:
        changed = False
        for n in range(max_degree, -1, -1):
            for x in cur.basis(n + 1):
                for y, c in sorted(cur.d.on_gen(n + 1, x).items(), key=lambda kv: repr(kv[0])):
                    if c in (1, -1):
                        step = elementary_reduction(cur, x, y, n)
                        rho = compose_reductions(rho, step)
                        cur = step.bottom
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return rho


def morse_reduction(C, match, bound=None, name=None):
    """Reduction of ``C`` onto the critical cells of an algebraic Morse matching.

    ``match(n, gen)`` returns ``None`` for a critical cell, ``("lower", partner, e)``
    when ``gen`` is matched with ``partner`` of degree ``n + 1`` and
    ``("upper", partner, e)`` when matched with ``partner`` of degree ``n - 1``;
    ``e = <d upper, lower>`` must be a unit.  The matching part of the
    differential is contracted explicitly and the rest is a perturbation,
    so the Basic Perturbation Lemma produces the reduction.  It terminates
    exactly when the matching is acyclic along every gradient path
    (otherwise :class:`NonNilpotent` is raised).
    """
    def d0(n, g):
        m = match(n, g)
        if m is not None and m[0] == "upper":
            return {m[1]: m[2]}
        return {}

    def delta(n, g):
        out = dict(C.d.on_gen(n, g))
        m = match(n, g)
        if m is not None and m[0] == "upper":
            _add_into(out, {m[1]: -m[2]})
        return out

    def eta0(n, g):
        m = match(n, g)
        if m is not None and m[0] == "lower":
            return {m[1]: m[2]}         # e is a unit, so 1/e = e
        return {}

    def alpha0(n, g):
        return {g: 1} if match(n, g) is None else {}

    crit_basis = None
    if C.is_effective:
        def crit_basis(n):
            return [g for g in C.basis(n) if match(n, g) is None]

    def crit_sample(n, rng):
        for _ in range(50):
            g = C.sample(n, rng)
            if g is not None and match(n, g) is None:
                return g
        return None

    top0 = C.with_differential(LinearMap(d0, -1))
    crit0 = ChainComplex(lambda n, g: {}, crit_basis, name=name or "critical", sample=crit_sample)
    rho0 = Reduction(top0, crit0, LinearMap(alpha0, 0), identity_map(), LinearMap(eta0, 1))
    pert = basic_perturbation(rho0, LinearMap(delta, -1), bound=bound)
    return Reduction(C, pert.bottom, pert.alpha, pert.beta, pert.eta)
