"""Numerical workbench for maximal Fourier multipliers.

Submodules: :mod:`grid` (lattices and transforms), :mod:`dyadic` (windows and
retracts), :mod:`fraccalc` (fractional calculus and the ``m~`` transform),
:mod:`symbols` (multiplier families), :mod:`norms`, :mod:`operators` and
:mod:`lab` (experiments and CLI).
"""

from .grid import Domain, Field, Grid, forward_transform, inverse_transform, lebesgue_norm
from .dyadic import WindowFamily
from .symbols import Symbol
from .dilation import TGrid

__version__ = "0.1.0"

__all__ = [
    "Domain",
    "Field",
    "Grid",
    "forward_transform",
    "inverse_transform",
    "lebesgue_norm",
    "WindowFamily",
    "Symbol",
    "TGrid",
    "__version__",
]
