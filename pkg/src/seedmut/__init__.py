"""Exact engine for quiver and seed mutation with weight gradings at
punctures, seeds from triangulated surfaces, dosp combinatorics, reflection
actions realized by mutation scripts, and an exterior-algebra checker for the
underlying identities."""

from .cluster import PSeed, Quiver, Seed, mutate_pseed, mutate_quiver, mutate_seed
from .laurent import LaurentPoly
from .weights import Dosp, MultiWeight, Osp, WeightVector

__all__ = [
    "Dosp", "LaurentPoly", "MultiWeight", "Osp", "PSeed", "Quiver", "Seed",
    "WeightVector", "mutate_pseed", "mutate_quiver", "mutate_seed",
]
