"""Parameter synthesis for parametric timed games with reachability objectives."""

from .geometry import GeometryError, Polyhedron, Region, Signature
from .model import PTG, Edge, ModelError, Objective
from .parser import ParseError, parse_model, print_constraint, print_model

__all__ = [
    "Edge",
    "GeometryError",
    "ModelError",
    "Objective",
    "PTG",
    "ParseError",
    "Polyhedron",
    "Region",
    "Signature",
    "parse_model",
    "print_constraint",
    "print_model",
]
