"""Maximum matching in general graphs (Edmonds' blossom method).

The search grows alternating trees from free vertices in increasing id order,
contracting odd cycles by redirecting ``base`` pointers. Ties are broken by
lowest vertex id, so results are deterministic.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from hitpack.graph_core import Graph


def _mate_array(g: Graph, m: Iterable[tuple[int, int]]) -> list[int]:
    mate = [-1] * g.n
    for u, v in m:
        if not g.has_edge(u, v):
            raise ValueError(f"({u},{v}) is not an edge")
        if mate[u] != -1 or mate[v] != -1:
            raise ValueError("matching pairs overlap")
        mate[u], mate[v] = v, u
    return mate


def _search(g: Graph, mate: list[int], root: int, allowed=None) -> list[int] | None:
    """Augmenting path from the free vertex ``root`` as a vertex list, or None.

    ``allowed`` optionally restricts the search to a vertex subset.
    """
    n = g.n
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in g.adj[v]:
            if allowed is not None and to not in allowed:
                continue
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                b = lca(v, to)
                blossom = [False] * n
                mark(v, b, to, blossom)
                mark(to, b, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = b
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    path = []
                    x = to
                    while x != -1:
                        px = parent[x]
                        path.append(x)
                        path.append(px)
                        x = mate[px]
                    path.reverse()
                    return path
                nxt = mate[to]
                used[nxt] = True
                queue.append(nxt)
    return None


def _augment(mate: list[int], path: list[int]) -> None:
    for i in range(0, len(path), 2):
        a, b = path[i], path[i + 1]
        mate[a], mate[b] = b, a


def find_augmenting_path(g: Graph, m: Iterable[tuple[int, int]]) -> list[int] | None:
    """An m-augmenting path (endpoints free, alternating), or None iff m is maximum."""
    mate = _mate_array(g, m)
    for r in range(g.n):
        if mate[r] == -1 and g.adj[r]:
            p = _search(g, mate, r)
            if p is not None:
                return p
    return None


def maximum_matching(g: Graph, allowed=None) -> set[tuple[int, int]]:
    """Maximum matching as a set of pairs (u, v) with u < v.

    With ``allowed`` the matching is computed in the induced subgraph on it.
    """
    allowed = None if allowed is None else frozenset(allowed)
    mate = [-1] * g.n
    # greedy start, lowest ids first
    for u in range(g.n):
        if allowed is not None and u not in allowed:
            continue
        if mate[u] == -1:
            for v in g.adj[u]:
                if mate[v] == -1 and (allowed is None or v in allowed):
                    mate[u], mate[v] = v, u
                    break
    for r in range(g.n):
        if mate[r] == -1 and (allowed is None or r in allowed):
            p = _search(g, mate, r, allowed)
            if p is not None:
                _augment(mate, p)
    return {(u, mate[u]) for u in range(g.n) if mate[u] > u}


def matching_number(g: Graph, allowed=None) -> int:
    return len(maximum_matching(g, allowed))


def is_matching(g: Graph, m: Iterable[tuple[int, int]]) -> bool:
    used = set()
    for u, v in m:
        if not g.has_edge(u, v) or u in used or v in used:
            return False
        used.update((u, v))
    return True
