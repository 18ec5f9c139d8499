"""Stable roommates and stable marriage adaptation under forced and forbidden pairs."""

from ._matchadapt import (
    Instance,
    MatchAdaptError,
    adapt,
    adapt_sm,
    blocking_pairs,
    oracle_adapt,
    parse_instance,
    random_instance,
    rotation_summary,
    stable_matchings,
)

__all__ = [
    "Instance",
    "MatchAdaptError",
    "adapt",
    "adapt_sm",
    "blocking_pairs",
    "oracle_adapt",
    "parse_instance",
    "random_instance",
    "rotation_summary",
    "stable_matchings",
]
