"""Matroid workbench: flat lattices, graded Möbius algebras and the
injective flat matchings certified by their omega-power maps."""

from .exactlin import GF, QQ, ExactMatrix, FieldSpec
from .matroid import Flat, FlatLattice, Matroid, check_axioms, from_lines, linear_matroid, named, uniform
from .mobius import MobiusAlgebra, OmegaWeights
from .matching import extract_matching, top_heavy_report, verify_injectivity

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "ExactMatrix",
    "FieldSpec",
    "Flat",
    "FlatLattice",
    "Matroid",
    "check_axioms",
    "from_lines",
    "linear_matroid",
    "named",
    "uniform",
    "MobiusAlgebra",
    "OmegaWeights",
    "extract_matching",
    "top_heavy_report",
    "verify_injectivity",
]
