"""Command-line front end: read a JSON task input, run a pipeline, print a report.

Tasks
-----
``homology-of-hocolim``  homology of ``hocolim X``
``cofibrant-homology``   homology of ``X^cof`` at every object
``cohomology``           ``H^n(X^cof; pi)`` for a diagram and coefficients
``bredon``               Bredon cohomology of a finite G-space
``eq-operations``        ``[K_G(pi, n), K_G(rho, k)]`` for ``k = 0..N``

Input files are described in the README; bundled examples can be
named as ``bundled:<name>`` (see ``--list-examples``).
"""

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

from .abgrp import ComputableHom, FEAbDiagram, FEAbGroup, IntMatrix
from .category import FiniteCategory
from .chain import homology
from .cohom import cochains, representable_coefficients
from .diagcat import GSpace, SpaceDiagram, fixed_points, orbit_category
from .errors import AuditError, EffHomError, ParseError
from .holan import cofibrant_replacement, hocolim_effective
from .reduct import verify_reduction_auto
from .simp import FiniteSpace, SimplicialMap, minimal_sphere, point

TASKS = ("homology-of-hocolim", "cofibrant-homology", "cohomology", "bredon", "eq-operations")


# input parsing

def load_input(ref):
    """Parsed JSON of a path or of ``bundled:<name>``."""
    try:
        if ref.startswith("bundled:"):
            name = ref[len("bundled:"):]
            text = resources.files("effhom.data").joinpath(f"{name}.json").read_text()
        else:
            with open(ref) as fh:
                text = fh.read()
        return json.loads(text)
    except FileNotFoundError as exc:
        raise ParseError(f"input not found: {ref}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {ref}: {exc}") from exc


def bundled_examples():
    names = [p.name[:-5] for p in resources.files("effhom.data").iterdir() if p.name.endswith(".json")]
    return sorted(names)


def parse_category(obj):
    """Category JSON, ``{"group": table}`` or ``{"orbit": table, "opposite": bool}``."""
    if not isinstance(obj, dict):
        raise ParseError("category must be an object")
    try:
        if "group" in obj:
            return FiniteCategory.from_group(obj["group"])
        if "orbit" in obj:
            O = orbit_category(obj["orbit"])
            return O.opposite() if obj.get("opposite", True) else O
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed group table: {exc}") from exc
    return FiniteCategory.from_json(obj)


def parse_group(obj):
    if isinstance(obj, str):
        from .abgrp import group_from_string
        try:
            return group_from_string(obj)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    try:
        return FEAbGroup.from_json(obj)
    except (TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"malformed group: {exc}") from exc


def parse_coefficients(obj, category):
    """``{"constant": G}``, ``{"representable": o}`` or ``{"groups": {o: G}, "homs": {f: rows}}``."""
    if not isinstance(obj, dict):
        raise ParseError("coefficients must be an object")
    if "constant" in obj:
        return FEAbDiagram.constant(category, parse_group(obj["constant"]))
    if "representable" in obj:
        o = obj["representable"]
        if o not in category.objects:
            raise ParseError(f"unknown object {o!r}")
        return representable_coefficients(category, o)
    try:
        groups = {o: parse_group(obj["groups"][o]) for o in category.objects}
        homs = {}
        for f, rows in obj.get("homs", {}).items():
            A, B = groups[category.dom(f)], groups[category.cod(f)]
            homs[f] = ComputableHom(A, B, IntMatrix(rows, B.ngens, A.ngens) if rows else
                                    IntMatrix.zeros(B.ngens, A.ngens))
        for f in category.morphisms:
            if f not in homs and not category.is_identity(f):
                raise ParseError(f"no homomorphism for arrow {f!r}")
    except KeyError as exc:
        raise ParseError(f"malformed coefficients: missing {exc}") from exc
    return FEAbDiagram(category, groups, homs)


def parse_space(entry, name=None):
    if entry == "point":
        return point()
    if isinstance(entry, dict) and entry.get("type") == "sphere":
        return minimal_sphere(int(entry["n"]))
    if isinstance(entry, dict) and entry.get("type") == "em":
        from .em import em_space
        return em_space(parse_group(entry["group"]), int(entry.get("n", 1)))
    return FiniteSpace.from_json(entry, name=name)


def parse_diagram(obj, category, strict=False):
    """``{"spaces": {o: entry}, "maps": {f: table}}``; EM values get their effective homology."""
    from .em import EMSpace, em_effective_homology, em_map
    if not isinstance(obj, dict) or "spaces" not in obj:
        raise ParseError("diagram needs a 'spaces' entry")
    try:
        spaces = {o: parse_space(obj["spaces"][o], str(o)) for o in category.objects}
    except KeyError as exc:
        raise ParseError(f"no space for object {exc}") from exc
    if any(isinstance(X, EMSpace) for X in spaces.values()):
        maps, eqs = {}, {}
        homs = obj.get("homs", {})
        for f in category.morphisms:
            if category.is_identity(f):
                continue
            A, B = spaces[category.dom(f)], spaces[category.cod(f)]
            if f in homs:
                h = ComputableHom(A.group, B.group, IntMatrix(homs[f], B.group.ngens, A.group.ngens))
            elif A.group == B.group:
                h = ComputableHom.identity(A.group)
            else:
                raise ParseError(f"no homomorphism for arrow {f!r}")
            maps[f] = em_map(A, B, h)
        for o, X in spaces.items():
            eqs[o] = em_effective_homology(X.group, X.n, X)
        return SpaceDiagram(category, spaces, maps, eqs, strict=strict, max_dim=3, samples=50)
    from .diagcat import _map_from_table
    entries = obj["spaces"]
    maps = {}
    for f in category.morphisms:
        if category.is_identity(f):
            continue
        A, B = spaces[category.dom(f)], spaces[category.cod(f)]
        try:
            if f in obj.get("maps", {}):
                maps[f] = _map_from_table(A, B, obj["maps"][f])
            elif entries[category.dom(f)] == entries[category.cod(f)]:
                maps[f] = SimplicialMap.identity(A)
            elif entries[category.cod(f)] == "point":
                maps[f] = SimplicialMap.to_point(A, B)
            else:
                raise ParseError(f"missing map for morphism {f!r}")
        except (KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"malformed map for {f!r}: {exc}") from exc
    return SpaceDiagram(category, spaces, maps, strict=strict)


# reports

def group_string(G):
    return str(G)


def compress(label, groups, start=0):
    """``H0=Z H1..H4=0``: runs of equal groups are written as ranges."""
    parts, i = [], 0
    while i < len(groups):
        j = i
        while j + 1 < len(groups) and groups[j + 1] == groups[i]:
            j += 1
        a, b = i + start, j + start
        parts.append(f"{label}{a}={groups[i]}" if a == b else f"{label}{a}..{label}{b}={groups[i]}")
        i = j + 1
    return " ".join(parts)


def _map_degrees(fn, degrees, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, degrees))
    return [fn(n) for n in degrees]


def _audit_equivalence(res, N):
    eq = res.equivalence
    for rho in (eq.left, eq.right):
        rep = verify_reduction_auto(rho, N, limit=200, count=100)
        if not rep.ok:
            raise AuditError(rep.failures[0]["identity"], rep.failures[0]["witness"])


def run_task(task, data, N, workers=1, strict=False):
    """Run a task on parsed input; returns an ordered ``{label: [group strings]}`` table."""
    if N < 0:
        raise ParseError("max degree must be >= 0")
    if task not in TASKS:
        raise ParseError(f"unknown task {task!r}")
    degrees = list(range(N + 1))
    if task == "bredon":
        try:
            gspace = GSpace.from_json(data["gspace"])
        except KeyError as exc:
            raise ParseError("bredon input needs 'gspace'") from exc
        X = fixed_points(gspace)
        rho = parse_coefficients(data.get("coefficients", {"constant": "Z"}), X.category)
        res = cofibrant_replacement(X)
        if strict:
            _audit_equivalence(res, N)
        cc = cochains(res, rho, N)
        return {"": _map_degrees(lambda n: group_string(cc.cohomology(n)), degrees, workers)}
    if "category" not in data:
        raise ParseError("input needs a 'category'")
    cat = parse_category(data["category"])
    if task == "eq-operations":
        from .em import em_diagram
        pi = parse_coefficients(data["pi"], cat)
        rho = parse_coefficients(data.get("rho", data["pi"]), cat)
        n = int(data.get("n", 1))
        X = em_diagram(pi, n, check=strict)
        res = cofibrant_replacement(X)
        if strict:
            _audit_equivalence(res, N)
        cc = cochains(res, rho, N, reduced=bool(data.get("reduced", True)))
        return {"": _map_degrees(lambda k: group_string(cc.cohomology(k)), degrees, workers)}
    X = parse_diagram(data.get("diagram", {}), cat, strict=strict)
    if task == "homology-of-hocolim":
        res = hocolim_effective(X)
        if strict:
            _audit_equivalence(res, N)
        j = res.effective.category.objects[0]
        E = res.effective.value(j)
        return {"": _map_degrees(lambda n: group_string(homology(E, n)), degrees, workers)}
    res = cofibrant_replacement(X)
    if strict:
        _audit_equivalence(res, N)
    if task == "cofibrant-homology":
        out = {}
        for j in cat.objects:
            E = res.effective.value(j)
            out[str(j)] = _map_degrees(lambda n, E=E: group_string(homology(E, n)), degrees, workers)
        return out
    rho = parse_coefficients(data["coefficients"], cat)
    cc = cochains(res, rho, N, reduced=bool(data.get("reduced", False)))
    return {"": _map_degrees(lambda n: group_string(cc.cohomology(n)), degrees, workers)}


def format_report(task, table, fmt):
    """Text report ``H0=Z H1=0 ...`` (one line per object when there are several) or JSON."""
    if fmt == "json":
        return json.dumps({"task": task, "groups": table}, sort_keys=True, indent=2)
    lines = []
    for prefix, groups in table.items():
        line = compress("H", groups)
        lines.append(f"{prefix}: {line}" if prefix else line)
    return "\n".join(lines)


def cache_key(task, data, N):
    canon = json.dumps({"task": task, "input": data, "N": N}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def cached_run(task, data, N, cache_dir=None, workers=1, strict=False):
    """``run_task`` with an on-disk cache of homology tables keyed by input content."""
    if not cache_dir:
        return run_task(task, data, N, workers, strict)
    path = os.path.join(cache_dir, cache_key(task, data, N) + ".json")
    if os.path.exists(path):
        with open(path) as fh:
            return json.load(fh)
    table = run_task(task, data, N, workers, strict)
    os.makedirs(cache_dir, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(table, fh)
    os.replace(tmp, path)
    return table


def build_parser():
    ap = argparse.ArgumentParser(prog="effhom", description="Effective homology of diagrams of spaces.")
    ap.add_argument("--task", choices=TASKS)
    ap.add_argument("--input", help="JSON input file or bundled:<name>")
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--cache", help="directory for cached homology tables")
    ap.add_argument("--strict-audit", action="store_true",
                    help="audit simplicial identities exhaustively and verify the reductions")
    ap.add_argument("--workers", type=int, default=1, help="threads used across degrees")
    ap.add_argument("--list-examples", action="store_true", help="list bundled inputs and exit")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.list_examples:
        print("\n".join(bundled_examples()))
        return 0
    if not args.task or not args.input:
        ap.error("--task and --input are required")
    try:
        data = load_input(args.input)
        task = args.task
        table = cached_run(task, data, args.max_degree, args.cache, args.workers, args.strict_audit)
        print(format_report(task, table, args.format))
        return 0
    except EffHomError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
