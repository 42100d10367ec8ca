"""Exact computations with Hom, Ext, purity, lim^1 and phantom maps for abelian groups."""
from .fgab import (
    Element,
    FgGroup,
    GroupMap,
    ShortExact,
    canonicalize,
    direct_sum,
    map_factorization,
    n_torsion_and_quotient,
)

__version__ = "0.1.0"
