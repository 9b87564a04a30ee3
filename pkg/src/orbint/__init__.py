"""Exact weighted orbital integrals for GL2/GL3 over F_q((eps)).

Two independent counting pipelines over truncated affine Springer fibers
plus a brute-force lattice oracle; see the README for the layout.
"""

__version__ = "0.1.0"

from .qpoly import QPoly, TPoly, TruncationQuasiPoly
from .root_data import CoweightVector, LambdaElement, LeviSpec, ParabolicSpec
from .polytopes import OrthogonalFamily, RegularElementSpec

__all__ = [
    "QPoly",
    "TPoly",
    "TruncationQuasiPoly",
    "CoweightVector",
    "LambdaElement",
    "LeviSpec",
    "ParabolicSpec",
    "OrthogonalFamily",
    "RegularElementSpec",
]
