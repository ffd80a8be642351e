"""
hypergeom: exact Euler data, balloon linking, Euler-series and mirror-transform
checks for the equivariant tangent bundle of the complete flag manifold Fl(n).
"""

__version__ = "0.1.0"
