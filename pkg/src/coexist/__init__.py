"""Coexistence of effects in interval effect algebras via witness mappings."""

from .effects import Effect, IntervalEffectAlgebra, algebra_from_json
from .errors import CoexError
from .groups import ConeSpec, HermitianGroup, IntVectorGroup, UnitalGroup
from .witness import BetaTable, GroundSet, d_value, verify_witness

__all__ = [
    "BetaTable",
    "CoexError",
    "ConeSpec",
    "Effect",
    "GroundSet",
    "HermitianGroup",
    "IntVectorGroup",
    "IntervalEffectAlgebra",
    "UnitalGroup",
    "algebra_from_json",
    "d_value",
    "verify_witness",
]
