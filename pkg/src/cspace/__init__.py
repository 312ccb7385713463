"""Finite colored spaces: sequences, closed sets, fusions, verification."""

from .core import (
    MAX_POINTS,
    ColorGraph,
    ColoredSpace,
    SubspaceView,
    color_graph,
    color_of,
    degree,
    induced_subspace,
    is_matching,
    m_stats,
    new_space,
    pair_index,
    pair_list,
    space_from_colors,
)
from .fileio import load_space, parse_space, serialize_space, sniff_format
from .isometry import (
    a3_set,
    a_k,
    isometric,
    isometric_sequence,
    isometry_key,
    isomorphic,
    isomorphism_key,
    is_unimodal,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_POINTS",
    "ColorGraph",
    "ColoredSpace",
    "SubspaceView",
    "color_graph",
    "color_of",
    "degree",
    "induced_subspace",
    "is_matching",
    "m_stats",
    "new_space",
    "pair_index",
    "pair_list",
    "space_from_colors",
    "load_space",
    "parse_space",
    "serialize_space",
    "sniff_format",
    "a3_set",
    "a_k",
    "isometric",
    "isometric_sequence",
    "isometry_key",
    "isomorphic",
    "isomorphism_key",
    "is_unimodal",
    "__version__",
]
