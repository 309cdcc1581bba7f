"""Canonical nested separation systems and the tree-decompositions they induce.

Vertex sets are int bitmasks over ``range(g.n)``.  The modules build on each
other in this order: ``graph``, ``separations``, ``profiles``, ``strategy``,
``treedec``, and the ``cli`` front end.
"""

from .errors import (
    GraphParseError,
    InvariantViolation,
    PreconditionError,
    ResourceLimitError,
    SeparationError,
    SeptreeError,
)
from .graph import Graph, automorphisms, parse_graph
from .profiles import Profile, enumerate_k_profiles, k_blocks
from .separations import Separation, enumerate_separations
from .strategy import KStrategy, Strategy, run_k_strategy, run_strategy
from .treedec import TreeDecomposition, build_from_nested, verify

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphParseError", "InvariantViolation", "KStrategy", "PreconditionError",
    "Profile", "ResourceLimitError", "Separation", "SeparationError", "SeptreeError",
    "Strategy", "TreeDecomposition", "automorphisms", "build_from_nested",
    "enumerate_k_profiles", "enumerate_separations", "k_blocks", "parse_graph",
    "run_k_strategy", "run_strategy", "verify",
]
