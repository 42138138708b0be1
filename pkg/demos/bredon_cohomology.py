"""Bredon cohomology of small G-spaces through fixed-point diagrams.

Run with ``python3 demos/bredon_cohomology.py``.
"""

from effhom.abgrp import Z, cyclic
from effhom.cohom import bredon_cohomology_range, constant_coefficients, representable_coefficients
from effhom.diagcat import GSpace, group_table_cyclic, orbit_category
from effhom.simp import FiniteSpace, nondeg, point


def free_circle(k):
    """A ``k``-gon with ``Z/k`` rotating it freely."""
    dims = {0: [f"v{i}" for i in range(k)], 1: [f"e{i}" for i in range(k)]}
    faces = {f"e{i}": [nondeg(0, f"v{(i + 1) % k}"), nondeg(0, f"v{i}")] for i in range(k)}
    action = {r: {f"{t}{i}": f"{t}{(i + r) % k}" for t in "ve" for i in range(k)} for r in range(1, k)}
    return GSpace(FiniteSpace(dims, faces), group_table_cyclic(k), action)


def main():
    table = group_table_cyclic(2)
    Oop = orbit_category(table).opposite()
    systems = {
        "constant Z": constant_coefficients(Oop, Z),
        "constant Z/2": constant_coefficients(Oop, cyclic(2)),
        "Z O(-, G/e)": representable_coefficients(Oop, "G/e"),
    }
    pt = GSpace.trivial(point(), table)
    for name, rho in systems.items():
        groups = [str(G) for G in bredon_cohomology_range(pt, rho, 4)]
        print(f"point, {name:14s} rho(G/G) = {str(rho.groups['G/G']):4s} H^0..4 = {groups}")

    for k in (2, 3):
        Oop = orbit_category(group_table_cyclic(k)).opposite()
        groups = [str(G) for G in bredon_cohomology_range(free_circle(k), constant_coefficients(Oop, Z), 3)]
        print(f"free Z/{k} circle, constant Z      H^0..3 = {groups}")


if __name__ == "__main__":
    main()
