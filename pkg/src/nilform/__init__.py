"""Exact computer algebra for nilpotent group cohomology.

Models finitely generated, torsion-free nilpotent groups through free
graded-commutative differential algebras with rational coefficients,
computes their cohomology rings and resonance varieties, and decides
partial formality degrees with machine-checkable evidence.
"""

__version__ = "0.1.0"
