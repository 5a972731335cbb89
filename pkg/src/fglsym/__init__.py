"""Exact symbolic engine for Schur and Hall-Littlewood function families
over formal group laws, with independent symmetrizer and generating
function routes plus determinantal and Pfaffian closed forms."""

from .series import (
    TruncSeries, SeriesError, NotAUnit, NotDivisible, InfiniteCap,
    IndexOutOfRange, X, B, U, T, BETA, M, x, b, u, t, beta, m,
    to_json_obj, from_json_obj,
)
from .fgl import FormalGroupLaw, fgl_specialize, NonNilpotentArgument
from .partitions import Partition

__all__ = [
    "TruncSeries", "SeriesError", "NotAUnit", "NotDivisible", "InfiniteCap",
    "IndexOutOfRange", "X", "B", "U", "T", "BETA", "M",
    "x", "b", "u", "t", "beta", "m", "to_json_obj", "from_json_obj",
    "FormalGroupLaw", "fgl_specialize", "NonNilpotentArgument",
    "Partition",
]

__version__ = "0.1.0"
