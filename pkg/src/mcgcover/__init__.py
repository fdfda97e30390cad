"""Exact homology representations of mapping class groups of N_{2r+1} via abelian covers."""

__version__ = "0.1.0"

from .homology import HomologyModel, standard_model
from .mcg import AutoWord, Catalog, catalog, parse
from .representation import RepMatrix, induced_map, rho, rho_product, varrho
from .surface import CoverSpec, SurfacePresentation

__all__ = [
    "AutoWord",
    "Catalog",
    "CoverSpec",
    "HomologyModel",
    "RepMatrix",
    "SurfacePresentation",
    "catalog",
    "induced_map",
    "parse",
    "rho",
    "rho_product",
    "standard_model",
    "varrho",
]
