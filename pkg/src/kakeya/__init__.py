"""Rank-r Kakeya sets in F_q^n: field arithmetic, constructions, verification,
exact bounds and polynomial-method audits."""

from .errors import *  # noqa: F401,F403
from .gf import GF, Field, field_new
from .linalg import PointSet, Subspace, enum_subspaces, gaussian_binomial
from .rng import DEFAULT_SEED, SplitMix64, make_rng

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SEED",
    "Field",
    "GF",
    "PointSet",
    "SplitMix64",
    "Subspace",
    "enum_subspaces",
    "field_new",
    "gaussian_binomial",
    "make_rng",
]
