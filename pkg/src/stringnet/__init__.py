"""Exact-arithmetic string-net cylinder categories and their transformations.

The package computes, over explicit number fields and without any floating
point, the cylinder categories of decorated 1-manifolds built from a
pivotal fusion category, their idempotent completions, the comparison
functors between the Frobenius-decorated and plainly decorated versions,
and a small double-categorical kernel of profunctors used to organize the
sewing structure.
"""

__version__ = "0.1.0"
