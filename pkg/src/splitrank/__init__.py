"""Exact integer hulls, split closures and finite split rank certificates."""
from .closure import (
    DirectionList,
    Reached,
    bounded_directions,
    bounded_split_rank,
    chvatal_closure,
    d_set_closure,
    direction_closure,
    iterate_closure,
    split_cut,
)
from .certify import RankCertificate, certify, certify_facet, check_certificate
from .hull import FacetInequality, FacetSystem, facet_system, integer_hull, lattice_points
from .kernel import BACKEND
from .lp import LPStatus, solve_lp
from .polyhedron import Polyhedron, conv_union, intersect, recession_cone

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DirectionList",
    "FacetInequality",
    "FacetSystem",
    "LPStatus",
    "Polyhedron",
    "RankCertificate",
    "Reached",
    "bounded_directions",
    "bounded_split_rank",
    "certify",
    "certify_facet",
    "check_certificate",
    "chvatal_closure",
    "conv_union",
    "d_set_closure",
    "direction_closure",
    "facet_system",
    "integer_hull",
    "intersect",
    "iterate_closure",
    "lattice_points",
    "recession_cone",
    "solve_lp",
    "split_cut",
    "__version__",
]
