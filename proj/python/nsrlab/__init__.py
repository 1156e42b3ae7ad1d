"""Python access to the nsrlab C++ core."""

from ._core import (
    NSRParams,
    compare,
    comparison_dataset,
    hand_weighted_nsr,
    init_params,
    nsr_from_snapshot,
    random_graph,
    selftest,
    shortest_paths,
    sign_bit,
    zero_bit,
)

__all__ = [
    "NSRParams",
    "compare",
    "comparison_dataset",
    "hand_weighted_nsr",
    "init_params",
    "nsr_from_snapshot",
    "random_graph",
    "selftest",
    "shortest_paths",
    "sign_bit",
    "zero_bit",
]
