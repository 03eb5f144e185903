"""Exact twisted torsion for circle-valued Morse models.

Arithmetic is exact throughout: rational functions over Q, twisted Laurent
series K_theta((t^l)) with tracked precision, and Novikov-completed group
rings of Z^m x|_A Z.
"""

from .algebra import MonomialAutomorphism, MultiPoly, RationalFunction
from .chain import (
    BasedChainComplex,
    CWDatum,
    HomologyBasis,
    compare_milnor_turaev,
    multiplicativity_check,
    reidemeister_torsion,
    torsion_milnor,
    torsion_turaev,
    validate_complex,
)
from .groups import GroupDescriptor, GroupElement, GroupRingElement, parse_group_ring
from .laurent import TwistedLaurentSeries, leading_invariant, parse_series, reduced_norm, rho_embed
from .linalg import RationalField, SeriesField, SkewMatrix, dieudonne_det, minor_equivalence_check
from .morse import (
    CircleMorseModel,
    assemble_differential,
    cat_map_model,
    circle_model,
    factorization_check,
    novikov_K,
    novikov_torsion,
    stabilize,
    verify_main_theorem,
)
from .novikov import NovikovElement, PrecisionError, compare_truncated, formal_exp, formal_log, novikov_invert_unit
from .values import Ambiguity, TorsionValue, Verdict, compare_values, torsion_compare
from .zeta import ClosedOrbit, OrbitSet, lefschetz_sign, orbit_enumerate, torus_suspension_orbits, zeta_exp, zeta_product

__version__ = "0.1.0"

__all__ = [
    "Ambiguity",
    "BasedChainComplex",
    "CWDatum",
    "CircleMorseModel",
    "ClosedOrbit",
    "GroupDescriptor",
    "GroupElement",
    "GroupRingElement",
    "HomologyBasis",
    "MonomialAutomorphism",
    "MultiPoly",
    "NovikovElement",
    "OrbitSet",
    "PrecisionError",
    "RationalField",
    "RationalFunction",
    "SeriesField",
    "SkewMatrix",
    "TorsionValue",
    "TwistedLaurentSeries",
    "Verdict",
    "assemble_differential",
    "cat_map_model",
    "circle_model",
    "compare_milnor_turaev",
    "compare_truncated",
    "compare_values",
    "dieudonne_det",
    "factorization_check",
    "formal_exp",
    "formal_log",
    "leading_invariant",
    "lefschetz_sign",
    "minor_equivalence_check",
    "multiplicativity_check",
    "novikov_K",
    "novikov_invert_unit",
    "novikov_torsion",
    "orbit_enumerate",
    "parse_group_ring",
    "parse_series",
    "reduced_norm",
    "reidemeister_torsion",
    "rho_embed",
    "stabilize",
    "torsion_compare",
    "torsion_milnor",
    "torsion_turaev",
    "torus_suspension_orbits",
    "validate_complex",
    "verify_main_theorem",
    "zeta_exp",
    "zeta_product",
]
