"""Branching solvers parameterized by k + l.

``solve_edge_branch`` follows the matching argument: either G has fewer than
l disjoint edges (done), G[U] already has l of them (hopeless), or an
augmenting path for a maximum matching of G[U] ends in two vertices u, v of
which a solution must delete one, or both become undeletable.

``solve_h_branch`` repeatedly finds l disjoint copies and branches on which
deletable vertex of the packing goes into the solution.
"""

from __future__ import annotations

from hitpack.graph_core import Clique, Edge, Instance, Subgraph, Verdict, clique_size
from hitpack.matching import find_augmenting_path, matching_number, maximum_matching
from hitpack.packing_oracle import Packer


class FamilyError(ValueError):
    """Solver called on a family it does not handle."""


def solve_edge_branch(inst: Instance, stats: dict | None = None) -> Verdict:
    if clique_size(inst.family) != 2:
        raise FamilyError("edge-branch needs the Edge (or Clique(2)) family")
    g = inst.graph
    ell = inst.ell
    stats = stats if stats is not None else {}
    stats.setdefault("nodes", 0)
    stats.setdefault("max_depth", 0)

    def rec(dead: frozenset, und: frozenset, k: int, depth: int):
        stats["nodes"] += 1
        stats["max_depth"] = max(stats["max_depth"], depth)
        assert depth <= inst.k + ell, "edge branch exceeded depth k + l"
        if k < 0:
            return None
        alive = frozenset(range(g.n)) - dead
        if matching_number(g, alive) < ell:
            return dead
        m = maximum_matching(g, und)
        if len(m) >= ell:
            return None
        # augmenting path for m inside G - dead; it exists since nu(G - dead) >= l > |m|
        path = _augmenting_in(g, alive, m)
        u, v = path[0], path[-1]
        for x in (u, v):
            if x not in und:
                r = rec(dead | {x}, und, k - 1, depth + 1)
                if r is not None:
                    return r
        return rec(dead, und | {u, v}, k, depth + 1)

    if ell == 0:
        return Verdict(False)
    res = rec(frozenset(), frozenset(inst.undeletable), inst.k, 0)
    return Verdict(True, res) if res is not None else Verdict(False)


def _augmenting_in(g, alive, m):
    sub, idx = g.induced(alive)
    back = {i: v for v, i in idx.items()}
    p = find_augmenting_path(sub, [(idx[a], idx[b]) for a, b in m])
    return [back[x] for x in p]


def solve_h_branch(inst: Instance, stats: dict | None = None) -> Verdict:
    if not isinstance(inst.family, (Clique, Subgraph, Edge)):
        raise FamilyError("h-branch needs a Clique or Subgraph family")
    stats = stats if stats is not None else {}
    stats.setdefault("nodes", 0)
    if inst.ell == 0:
        return Verdict(False)
    pk = Packer(inst.graph, inst.family)
    und = inst.undeletable

    def rec(alive: int, chosen: tuple, k: int):
        stats["nodes"] += 1
        packing = pk.find(inst.ell, alive)
        if packing is None:
            return frozenset(chosen)
        if k == 0:
            return None
        cands = sorted({x for obj in packing for x in obj if x not in und})
        for x in cands:
            r = rec(alive & ~(1 << x), chosen + (x,), k - 1)
            if r is not None:
                return r
        return None

    res = rec(pk.full, (), inst.k)
    return Verdict(True, res) if res is not None else Verdict(False)
