"""Homotopy colimits of small diagrams, checked against the direct model.

Run with ``python3 demos/homotopy_colimits.py``.
"""

from effhom.category import FiniteCategory
from effhom.diagcat import SpaceDiagram, group_table_cyclic
from effhom.holan import cofibrant_replacement, direct_model_homology, hocolim_effective
from effhom.simp import SimplicialMap, minimal_sphere, point


def suspension(n):
    """The diagram ``* <- S^n -> *``; its homotopy colimit is ``S^(n+1)``."""
    cat = FiniteCategory.pushout_shape()
    S = minimal_sphere(n)
    spaces = {"a": point(), "b": point(), "c": S}
    maps = {f: SimplicialMap.to_point(S, spaces[cat.cod(f)]) for f in cat.morphisms if not cat.is_identity(f)}
    return SpaceDiagram(cat, spaces, maps)


def show(label, res, j, top):
    eff = [str(res.homology(j, n)) for n in range(top + 1)]
    direct = [str(direct_model_homology(res.space, j, n)) for n in range(top + 1)]
    print(f"{label:34s} effective {eff}")
    print(f"{'':34s} direct    {direct}")


def main():
    for n in (1, 2):
        show(f"hocolim(* <- S^{n} -> *)", hocolim_effective(suspension(n)), "*", 4)

    # a point with a trivial Z/2 action: the homotopy colimit is the classifying space
    z2 = SpaceDiagram.constant(FiniteCategory.from_group(group_table_cyclic(2)), point())
    show("hocolim of the Z/2 point", hocolim_effective(z2), "*", 4)

    # the cofibrant replacement of the same diagram is contractible at its object
    cof = cofibrant_replacement(z2)
    print("cofibrant replacement at *        ", [str(cof.homology("*", n)) for n in range(4)])


if __name__ == "__main__":
    main()
