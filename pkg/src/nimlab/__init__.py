"""Tools for studying edges of k-colored complete graphs that lie in no
monochromatic copy of a fixed pattern graph.

The package provides exact and heuristic searches for the maximum number of
such edges, exact Turan-type solvers with persistent caching, deterministic
coloring constructions, and machine checks of the finite counting bounds
behind them.
"""

from .graphs import SimpleGraph, edge_index, edge_pairs, decode_graph6, encode_graph6
from .canon import CanonicalCode, canonical_form, enumerate_graphs
from .patterns import BipartitePattern, build_pattern, parse_pattern
from .monoscan import (
    EdgeColoring,
    NimReport,
    enumerate_mono_copies,
    mono_copy_exists,
    nim_edges,
)
from .turan import TuranRecord, TuranCache, ex_exact, ex_star_exact, is_h_free
from .search import SearchReport, f_exact, f_heuristic, verify_extremal_characterization
from .constructions import (
    OverlayCertificate,
    extremal_two_coloring,
    pentagon_three_coloring,
    permuted_overlay_coloring,
)
from .audit import (
    StarDecomposition,
    audit_k_color,
    audit_two_color,
    build_star_decomposition,
    is_reducible,
    kst_reducibility,
)

__all__ = [
    "SimpleGraph",
    "edge_index",
    "edge_pairs",
    "encode_graph6",
    "decode_graph6",
    "CanonicalCode",
    "canonical_form",
    "enumerate_graphs",
    "BipartitePattern",
    "build_pattern",
    "parse_pattern",
    "EdgeColoring",
    "NimReport",
    "mono_copy_exists",
    "nim_edges",
    "enumerate_mono_copies",
    "TuranRecord",
    "TuranCache",
    "is_h_free",
    "ex_exact",
    "ex_star_exact",
    "SearchReport",
    "f_exact",
    "f_heuristic",
    "verify_extremal_characterization",
    "OverlayCertificate",
    "extremal_two_coloring",
    "permuted_overlay_coloring",
    "pentagon_three_coloring",
    "StarDecomposition",
    "build_star_decomposition",
    "audit_two_color",
    "audit_k_color",
    "kst_reducibility",
    "is_reducible",
]

__version__ = "0.1.0"
