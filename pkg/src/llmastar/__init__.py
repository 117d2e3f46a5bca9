"""Waypoint-guided A* path planning and benchmarking.

Continuous 2D maps with segment barriers, searched on an 8-connected
integer lattice.  Provides classical A*, dynamic weighted A*, and a guided
search whose priority adds the distance to the current waypoint from an
externally supplied target list (an LLM, a cache replay, or an offline
oracle), plus dataset generation, benchmark metrics, and SVG rendering.
"""

from .env import (
    Barrier,
    Environment,
    Point,
    move_valid,
    neighbors,
    path_length,
    path_valid,
    point_blocked,
    scale_environment,
    segments_intersect,
)
from .llm_astar import TargetList, current_f, llm_astar_search, sanitize_targets
from .metrics import (
    BenchReport,
    RunRecord,
    build_report,
    efficiency_ratios,
    geometric_mean,
    growth_factor,
    relative_path_length,
    valid_path_ratio,
)
from .search import (
    HeuristicKind,
    NoPathError,
    SearchResult,
    SearchStats,
    astar,
    reconstruct_path,
    weighted_astar,
)
from .dataset import GenParams, MapRecord, generate_dataset, generate_map, load_dataset, save_dataset
from .waypoints import (
    PromptStyle,
    ProviderConfig,
    ResponseCache,
    llm_only_path,
    oracle_waypoints,
    parse_path,
    query_waypoints,
    render_prompt,
    sample_path_waypoints,
)

__all__ = [
    "Barrier",
    "BenchReport",
    "Environment",
    "GenParams",
    "HeuristicKind",
    "MapRecord",
    "NoPathError",
    "Point",
    "PromptStyle",
    "ProviderConfig",
    "ResponseCache",
    "RunRecord",
    "SearchResult",
    "SearchStats",
    "TargetList",
    "astar",
    "build_report",
    "current_f",
    "efficiency_ratios",
    "generate_dataset",
    "generate_map",
    "geometric_mean",
    "growth_factor",
    "llm_astar_search",
    "llm_only_path",
    "load_dataset",
    "move_valid",
    "neighbors",
    "oracle_waypoints",
    "parse_path",
    "path_length",
    "path_valid",
    "point_blocked",
    "query_waypoints",
    "reconstruct_path",
    "relative_path_length",
    "render_prompt",
    "sample_path_waypoints",
    "sanitize_targets",
    "save_dataset",
    "scale_environment",
    "segments_intersect",
    "valid_path_ratio",
    "weighted_astar",
]

__version__ = "0.1.0"
