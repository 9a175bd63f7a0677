"""Finite, exact certificates for acyclic and binate group constructions."""

__version__ = "0.1.0"

from .finite import FiniteGroup, closure
from .perm import Permutation, parse_cycles
from .presentation import Presentation, abelianization, homology_report, parse_presentation
from .words import FreeWord, Gen, parse_word

__all__ = [
    "FiniteGroup",
    "FreeWord",
    "Gen",
    "Permutation",
    "Presentation",
    "abelianization",
    "closure",
    "homology_report",
    "parse_cycles",
    "parse_presentation",
    "parse_word",
    "__version__",
]
