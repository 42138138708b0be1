"""Finite categories given by an explicit composition table, and functors between them."""

from itertools import product as _product

from .errors import AuditError, ParseError


class FiniteCategory:
    """Finite category with named objects and morphisms.

    ``compose_table[(g, f)]`` is ``g o f`` for every composable pair
    (``cod f == dom g``).  The constructor audits the table: composites are
    typed correctly, identities are units and composition is associative.
    """

    def __init__(self, objects, morphisms, compose, identities, name=None, check=True):
        self.objects = list(objects)
        self._dom = {}
        self._cod = {}
        self.morphisms = []
        for m, (d, c) in morphisms.items() if isinstance(morphisms, dict) else morphisms:
            if m in self._dom:
                raise AuditError("duplicate morphism", m)
            self.morphisms.append(m)
            self._dom[m] = d
            self._cod[m] = c
        self.compose_table = dict(compose)
        self.identities = dict(identities)
        self._identity_set = set(self.identities.values())
        self.name = name
        self._hom = {}
        for m in self.morphisms:
            self._hom.setdefault((self._dom[m], self._cod[m]), []).append(m)
        if check:
            self.audit()

    def audit(self):
        objs = set(self.objects)
        for m in self.morphisms:
            if self._dom[m] not in objs or self._cod[m] not in objs:
                raise AuditError("morphism endpoints", m)
        for o in self.objects:
            i = self.identities.get(o)
            if i is None or self._dom.get(i) != o or self._cod.get(i) != o:
                raise AuditError("identity", o)
        for g in self.morphisms:
            for f in self.hom_to(self._dom[g]):
                gf = self.compose_table.get((g, f))
                if gf is None:
                    raise AuditError("missing composite", (g, f))
                if self._dom.get(gf) != self._dom[f] or self._cod.get(gf) != self._cod[g]:
                    raise AuditError("composite typing", (g, f, gf))
        for key in self.compose_table:
            g, f = key
            if self._cod.get(f) != self._dom.get(g):
                raise AuditError("composite of non-composable pair", key)
        for f in self.morphisms:
            if self.compose_table[(self.identities[self._cod[f]], f)] != f or \
                    self.compose_table[(f, self.identities[self._dom[f]])] != f:
                raise AuditError("unit law", f)
        for f in self.morphisms:
            for g in self.hom_from(self._cod[f]):
                gf = self.compose_table[(g, f)]
                for h in self.hom_from(self._cod[g]):
                    left = self.compose_table[(h, gf)]
                    right = self.compose_table[(self.compose_table[(h, g)], f)]
                    if left != right:
                        raise AuditError("associativity", (h, g, f))

    def dom(self, m):
        return self._dom[m]

    def cod(self, m):
        return self._cod[m]

    def hom(self, a, b):
        return list(self._hom.get((a, b), ()))

    def hom_from(self, a):
        return [m for m in self.morphisms if self._dom[m] == a]

    def hom_to(self, b):
        return [m for m in self.morphisms if self._cod[m] == b]

    def compose(self, g, f):
        """``g o f``."""
        try:
            return self.compose_table[(g, f)]
        except KeyError:
            raise AuditError("non-composable pair", (g, f)) from None

    def identity(self, o):
        return self.identities[o]

    def is_identity(self, m):
        return m in self._identity_set

    def opposite(self):
        return FiniteCategory(
            self.objects,
            [(m, (self._cod[m], self._dom[m])) for m in self.morphisms],
            {(f, g): gf for (g, f), gf in self.compose_table.items()},
            self.identities,
            name=f"{self.name}^op" if self.name else None,
            check=False,
        )

    def product(self, other):
        objs = [(a, b) for a in self.objects for b in other.objects]
        mors = [((f, g), ((self._dom[f], other._dom[g]), (self._cod[f], other._cod[g])))
                for f in self.morphisms for g in other.morphisms]
        comp = {}
        for (f2, f1), f in self.compose_table.items():
            for (g2, g1), g in other.compose_table.items():
                comp[((f2, g2), (f1, g1))] = (f, g)
        ids = {(a, b): (self.identities[a], other.identities[b]) for a, b in objs}
        return FiniteCategory(objs, mors, comp, ids, check=False)

    def nondegenerate_chains(self, k):
        """Identity-free composable chains ``(i0, (f1, ..., fk))``."""
        chains = [(o, ()) for o in self.objects]
        for _ in range(k):
            nxt = []
            for i0, fs in chains:
                end = self._cod[fs[-1]] if fs else i0
                for f in self.hom_from(end):
                    if not self.is_identity(f):
                        nxt.append((i0, fs + (f,)))
            chains = nxt
        return chains

    def __repr__(self):
        return f"FiniteCategory({self.name or ''}: {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    # construction helpers

    @classmethod
    def terminal(cls, obj="*"):
        return cls([obj], [("id", (obj, obj))], {("id", "id"): "id"}, {obj: "id"}, name="terminal")

    @classmethod
    def from_group(cls, table, names=None, obj="*"):
        """One-object category of a group given by its multiplication table.

        Morphism ``g`` composes as ``g o h = g*h``.
        """
        n = len(table)
        names = list(names) if names is not None else [f"g{i}" for i in range(n)]
        e = _group_identity(table)
        mors = [(names[g], (obj, obj)) for g in range(n)]
        comp = {(names[g], names[h]): names[table[g][h]] for g in range(n) for h in range(n)}
        return cls([obj], mors, comp, {obj: names[e]}, name="group")

    @classmethod
    def pushout_shape(cls):
        """The category ``a <- c -> b``."""
        mors = [("id_a", ("a", "a")), ("id_b", ("b", "b")), ("id_c", ("c", "c")),
                ("f", ("c", "a")), ("g", ("c", "b"))]
        comp = {}
        ids = {"a": "id_a", "b": "id_b", "c": "id_c"}
        for m, (d, c) in mors:
            comp[(ids[c], m)] = m
            comp[(m, ids[d])] = m
        return cls(["a", "b", "c"], mors, comp, ids, name="pushout")

    @classmethod
    def from_json(cls, obj):
        try:
            objects = list(obj["objects"])
            mors = [(m["name"], (m["dom"], m["cod"])) for m in obj["morphisms"]]
            names = {m for m, _ in mors}
            ids = {}
            for o in objects:
                given = obj.get("identities", {}).get(o)
                if given is None:
                    given = f"id_{o}"
                    if given not in names:
                        mors.append((given, (o, o)))
                        names.add(given)
                ids[o] = given
            comp = {(g, f): gf for g, f, gf in obj.get("compose", [])}
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed category: {exc}") from exc
        for m, (d, c) in mors:
            comp.setdefault((ids[c], m), m)
            comp.setdefault((m, ids[d]), m)
        return cls(objects, mors, comp, ids, name=obj.get("name"))

    def to_json(self):
        return {
            "objects": list(self.objects),
            "morphisms": [{"name": m, "dom": self._dom[m], "cod": self._cod[m]} for m in self.morphisms],
            "identities": dict(self.identities),
            "compose": [[g, f, gf] for (g, f), gf in sorted(self.compose_table.items(), key=repr)],
        }


def _group_identity(table):
    n = len(table)
    for e in range(n):
        if all(table[e][g] == g and table[g][e] == g for g in range(n)):
            return e
    raise AuditError("group identity", None)


def check_group_table(table):
    n = len(table)
    if any(len(r) != n for r in table):
        raise AuditError("group table shape", None)
    e = _group_identity(table)
    for a, b, c in _product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise AuditError("group associativity", (a, b, c))
    for a in range(n):
        if e not in table[a]:
            raise AuditError("group inverse", a)
    return e


class Functor:
    """Functor between finite categories given by object and morphism maps."""

    def __init__(self, source, target, obj_map, mor_map, check=True):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        if check:
            self.audit()

    def audit(self):
        s, t = self.source, self.target
        for m in s.morphisms:
            fm = self.mor_map[m]
            if t.dom(fm) != self.obj_map[s.dom(m)] or t.cod(fm) != self.obj_map[s.cod(m)]:
                raise AuditError("functor typing", m)
        for o in s.objects:
            if self.mor_map[s.identity(o)] != t.identity(self.obj_map[o]):
                raise AuditError("functor identity", o)
        for (g, f), gf in s.compose_table.items():
            if t.compose(self.mor_map[g], self.mor_map[f]) != self.mor_map[gf]:
                raise AuditError("functoriality", (g, f))

    def __call__(self, x):
        return self.mor_map[x] if x in self.mor_map else self.obj_map[x]

    def obj(self, o):
        return self.obj_map[o]

    def mor(self, m):
        return self.mor_map[m]

    @classmethod
    def identity(cls, C):
        return cls(C, C, {o: o for o in C.objects}, {m: m for m in C.morphisms}, check=False)

    @classmethod
    def to_terminal(cls, C, T=None):
        T = T or FiniteCategory.terminal()
        (o,) = T.objects
        return cls(C, T, {x: o for x in C.objects}, {m: T.identity(o) for m in C.morphisms}, check=False)
