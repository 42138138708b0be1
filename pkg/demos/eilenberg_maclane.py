"""Effective homology of K(pi, 1) and pointed equivariant operations.

Run with ``python3 demos/eilenberg_maclane.py``.
"""

from effhom.abgrp import FEAbGroup, Z, cyclic
from effhom.chain import homology_range
from effhom.cohom import constant_coefficients, equivariant_operations_range
from effhom.diagcat import group_table_cyclic, orbit_category
from effhom.em import em_effective_homology
from effhom.reduct import verify_reduction_auto


def main():
    for G in (Z, cyclic(2), cyclic(3), FEAbGroup([2, 0])):
        e = em_effective_homology(G)
        groups = [str(H) for H in homology_range(e.target, 4)]
        rep = verify_reduction_auto(e.right, 3, count=200)
        print(f"K({G}, 1): H_0..4 = {groups}  reduction checked on {rep.checked} probes, ok={rep.ok}")

    Oop = orbit_category(group_table_cyclic(2)).opposite()
    pi = constant_coefficients(Oop, Z)
    for rho_name, rho in (("Z", pi), ("Z/2", constant_coefficients(Oop, cyclic(2)))):
        groups = [str(H) for H in equivariant_operations_range(pi, rho, 1, 3)]
        print(f"[K_G(Z,1), K_G({rho_name},k)] for G = Z/2, k = 0..3: {groups}")


if __name__ == "__main__":
    main()
