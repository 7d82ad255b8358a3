"""Solvers and instance generators for X-HitPack problems.

Given a graph G, an undeletable set U, a budget k and a threshold l, an
X-HitPack instance asks whether at most k vertices outside U can be deleted
so that fewer than l vertex-disjoint objects of type X remain.
"""

from hitpack.graph_core import (
    Clique,
    Cycle,
    Edge,
    Graph,
    Instance,
    ParseError,
    Subgraph,
    Verdict,
    components,
    delete_vertices,
    emit_instance,
    parse_instance,
)

__all__ = [
    "Clique",
    "Cycle",
    "Edge",
    "Graph",
    "Instance",
    "ParseError",
    "Subgraph",
    "Verdict",
    "components",
    "delete_vertices",
    "emit_instance",
    "parse_instance",
]
