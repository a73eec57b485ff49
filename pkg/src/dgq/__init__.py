"""Exact computation with finite double groupoids and their box algebras:
validation, vacancy, matched pairs, cocycle twists, weak Hopf structure
verification, groupoid cohomology and the associated long exact sequence."""

__version__ = "0.1.0"
