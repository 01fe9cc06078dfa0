from coarse_menger.core.distance import INF, ball, ball_masks, bfs, is_scattered, set_distance, shortest_dist
from coarse_menger.core.graph import (
    Graph,
    Path,
    Separation,
    cycle_graph,
    dumps,
    graph_from_doc,
    graph_to_doc,
    grid_graph_edges,
    is_cycle,
    is_linkage,
    is_path,
    is_st_path,
    path_graph,
)
from coarse_menger.core.linked import is_well_linked
from coarse_menger.core.flow import disjoint_path_count, menger, st_path_through
from coarse_menger.core.star import StarReplacement, star_replace

__all__ = [
    "INF", "Graph", "Path", "Separation", "StarReplacement", "ball", "ball_masks", "bfs",
    "cycle_graph", "disjoint_path_count", "dumps", "graph_from_doc", "graph_to_doc",
    "grid_graph_edges", "is_cycle", "is_linkage", "is_path", "is_scattered", "is_st_path",
    "is_well_linked", "menger", "path_graph", "set_distance", "shortest_dist", "st_path_through",
    "star_replace",
]
