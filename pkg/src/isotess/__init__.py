"""Exact curvature and isoperimetric analysis of tessellating metric graphs."""

from .curvature import (
    CurvatureReport,
    characteristic_value,
    degsum_check,
    gauss_bonnet_check,
    global_constants,
    vertex_curvature,
    vertex_weight,
)
from .families import (
    GkParams,
    PQParams,
    closed_forms_pq,
    gen_gk,
    gen_nonequilateral_tree,
    gen_pq_ball,
    gk_witness_sequence,
)
from .graphcore import (
    MetricGraph,
    SubgraphSelection,
    Tile,
    build_graph,
    classify_subgraph,
    complete_closure,
    subgraph_stats,
    trace_faces,
    validate_tessellation,
)
from .isoperimetry import (
    AlphaBracket,
    Bound,
    Budget,
    alpha_bracket,
    alpha_comb_upper_bruteforce,
    alpha_upper_bruteforce,
    cheeger_interval,
    enumerate_connected_subgraphs,
    enumerate_starlike_complete,
    equilateral_transform,
    lower_bounds,
)
from .rational import INF, format_extended, parse_rational

__version__ = "0.1.0"

__all__ = [
    "AlphaBracket",
    "Bound",
    "Budget",
    "CurvatureReport",
    "GkParams",
    "INF",
    "MetricGraph",
    "PQParams",
    "SubgraphSelection",
    "Tile",
    "alpha_bracket",
    "alpha_comb_upper_bruteforce",
    "alpha_upper_bruteforce",
    "build_graph",
    "characteristic_value",
    "cheeger_interval",
    "classify_subgraph",
    "closed_forms_pq",
    "complete_closure",
    "degsum_check",
    "enumerate_connected_subgraphs",
    "enumerate_starlike_complete",
    "equilateral_transform",
    "format_extended",
    "gauss_bonnet_check",
    "gen_gk",
    "gen_nonequilateral_tree",
    "gen_pq_ball",
    "gk_witness_sequence",
    "global_constants",
    "lower_bounds",
    "parse_rational",
    "subgraph_stats",
    "trace_faces",
    "validate_tessellation",
    "vertex_curvature",
    "vertex_weight",
    "__version__",
]
