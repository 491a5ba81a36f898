"""Indexing weighted sequences (position weight matrices).

Positions are 0-based throughout; the text query interface (`query`) prints
1-based positions like the command-line tool.
"""

from ._windex import (
    ApproxIndex,
    Error,
    LoadError,
    ParseError,
    PropertySuffixTree,
    RangeError,
    ValidationError,
    WeightedIndex,
    WeightedSequence,
    build_randomized_approx_family,
    build_randomized_family,
    build_z_estimation,
    enumerate_multiset,
    match_probability,
    naive_weighted_occurrences,
    randomized_approx_family_size,
    randomized_family_size,
    solid_factors_at,
    verify_z_estimation,
)

__all__ = [
    "ApproxIndex",
    "Error",
    "LoadError",
    "ParseError",
    "PropertySuffixTree",
    "RangeError",
    "ValidationError",
    "WeightedIndex",
    "WeightedSequence",
    "build_randomized_approx_family",
    "build_randomized_family",
    "build_z_estimation",
    "enumerate_multiset",
    "match_probability",
    "naive_weighted_occurrences",
    "randomized_approx_family_size",
    "randomized_family_size",
    "solid_factors_at",
    "verify_z_estimation",
]

__version__ = "0.1.0"
