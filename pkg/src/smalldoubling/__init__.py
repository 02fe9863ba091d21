"""Computational tools for finite sets of integers with small doubling."""

from .core_sets import (
    IntSet,
    PairRelation,
    additive_energy,
    difference_set,
    doubling,
    iterated_sumset,
    restricted_sumset,
    signed_combination,
    sumset,
)
from .errors import InvariantError, PreconditionError, ResourceError
from .progressions import GAP2, Progression1D, density_on, elements, is_proper, smallest_containing_ap

__version__ = "0.1.0"

__all__ = [
    "IntSet", "PairRelation", "sumset", "difference_set", "iterated_sumset",
    "signed_combination", "restricted_sumset", "doubling", "additive_energy",
    "Progression1D", "GAP2", "elements", "is_proper", "smallest_containing_ap",
    "density_on", "PreconditionError", "ResourceError", "InvariantError",
]
