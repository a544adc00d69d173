"""Rectangle-contour residue evaluation of improper real integrals, with
independent oscillatory quadrature to check every closed form."""

from . import catalog, complexfn, contour, realaxis, residues, theorems
from .errors import CauchyRectError

__version__ = "0.1.0"

__all__ = ["catalog", "complexfn", "contour", "realaxis", "residues", "theorems",
           "CauchyRectError", "__version__"]
