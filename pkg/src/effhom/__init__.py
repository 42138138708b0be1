"""Exact effective homology of diagrams of simplicial sets.

Homotopy colimits and cofibrant replacements with effective homology,
perturbation lemmas, Eilenberg-MacLane spaces and Bredon cohomology.
"""

__version__ = "0.1.0"
