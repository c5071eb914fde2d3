"""Exact semistability checks for quadric and decorated vector bundles."""

from .core import TOP, InvalidInstance, VanishingPattern, WeightedFiltration
from .checker import Stability, SubbundleCatalog, Verdict, verdict_full, verdict_reduced
from .splitter import split_full, verify_decomposition

__all__ = [
    "TOP",
    "InvalidInstance",
    "VanishingPattern",
    "WeightedFiltration",
    "Stability",
    "SubbundleCatalog",
    "Verdict",
    "verdict_full",
    "verdict_reduced",
    "split_full",
    "verify_decomposition",
]
__version__ = "0.1.0"
