"""Path hypergeometric functions, trace oracles and eigenfunction checks."""
from .core import (EXACT, FLOAT, ModeError, PreconditionError, TruncatedSeries, falling,
                   geometric_expand, lattice, multi_indices, rising, stats)
from .report import CheckReport

__all__ = ["EXACT", "FLOAT", "ModeError", "PreconditionError", "TruncatedSeries", "falling",
           "geometric_expand", "lattice", "multi_indices", "rising", "stats", "CheckReport"]

__version__ = "0.1.0"
