"""tanglekit: biased multigraphs, tangle analysis, linkages and structure.

A biased graph pairs a multigraph with a theta-consistent family of
"balanced" cycles.  This package decides whether such a graph is tangled
(unbalanced, no blocking vertex, no two vertex-disjoint unbalanced cycles),
finds linkages or 3-planar obstructions, builds the known tangled families,
and classifies tangled inputs against them, exhaustively and at desk scale.
"""

from .limits import Caps, DEFAULT_CAPS, ResourceLimitError, caps_from_env

__all__ = [
    "Caps",
    "DEFAULT_CAPS",
    "ResourceLimitError",
    "caps_from_env",
]

__version__ = "0.1.0"
