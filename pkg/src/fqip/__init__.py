"""Exact finite-field polynomial combinatorics: ideals, IP*-sets, syndetic families
and measure-preserving actions of F_q[x] at a degree truncation."""

__version__ = "0.1.0"

from .field import FieldElement, FieldError, FieldSpec
from .poly import (Poly, PolyError, UniverseError, canonical_index, enumerate_polys, format_poly,
                   from_index, parse_poly, poly_divmod)
from .multipoly import MultiPoly, format_multipoly, parse_multipoly
from .ideal import IdealGens, WitnessNotFound, ideal_member, ip_witness, reduce
from .universe import TruncatedSet, Universe, get_universe
from .sets import (CosetStructure, NatSet, central_necessary, coset_structure, deg_pullback,
                   delta_set, fs_set, ip_obstruction, ipstar_proxy, is_ip_truncated, is_syndetic,
                   is_syndetic_mult, is_thick, ramsey_refine)
from .mds import (BernoulliShift, Cylinder, EventSet, FiniteMDS, build_system, classify_mixing,
                  correlation, correlation_set, khintchine_set)

__all__ = [
    "FieldElement", "FieldError", "FieldSpec",
    "Poly", "PolyError", "UniverseError", "canonical_index", "enumerate_polys", "format_poly",
    "from_index", "parse_poly", "poly_divmod",
    "MultiPoly", "format_multipoly", "parse_multipoly",
    "IdealGens", "WitnessNotFound", "ideal_member", "ip_witness", "reduce",
    "TruncatedSet", "Universe", "get_universe",
    "CosetStructure", "NatSet", "central_necessary", "coset_structure", "deg_pullback",
    "delta_set", "fs_set", "ip_obstruction", "ipstar_proxy", "is_ip_truncated", "is_syndetic",
    "is_syndetic_mult", "is_thick", "ramsey_refine",
    "BernoulliShift", "Cylinder", "EventSet", "FiniteMDS", "build_system", "classify_mixing",
    "correlation", "correlation_set", "khintchine_set",
]
