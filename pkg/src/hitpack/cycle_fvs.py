"""Cycle-HitPack through a feedback vertex set F.

Pipeline: bound |F| by the Erdős–Pósa threshold, guess which part F' of F is
deleted, make the rest of F undeletable, shrink high degrees in the forest
G' = G - F, then branch on usable cycle packings to collect sets of forest
paths that a solution must hit, and finally solve each path-hitting problem
on the forest.

Vertex ids are never renumbered: deleting a vertex here means removing all
of its edges, which is the same thing for cycles and keeps witnesses valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from hitpack.graph_core import Cycle, Graph, Instance, Verdict


# ---------------------------------------------------------------- thresholds


def erdos_posa_threshold(k: int, ell: int) -> int:
    """FVS size above which G surely has k + l disjoint cycles (logs base 2, clamped below 2)."""
    p = k + ell
    lg = math.log2(p) if p >= 2 else 0.0
    lglg = math.log2(lg) if lg >= 1 else 0.0
    return max(0, math.ceil(4 * p * (lg + lglg + 4)) + p - 1)


def upsilon(f: int, k: int) -> int:
    return f ** 3 + (k + 3) * f ** 2 + (k + 2) * f


def gamma(f: int, k: int) -> int:
    return (upsilon(f, k) * (2 * f + k) * (f + 3)) ** 2


# ---------------------------------------------------------------- FVS


def _strip(adj: dict) -> dict:
    """Drop vertices of degree <= 1 repeatedly (they lie on no cycle)."""
    adj = {v: set(nb) for v, nb in adj.items()}
    low = [v for v, nb in adj.items() if len(nb) <= 1]
    while low:
        v = low.pop()
        if v not in adj:
            continue
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) <= 1:
                low.append(w)
    return adj


def _shortest_cycle(adj: dict) -> list | None:
    best = None
    for s in sorted(adj):
        parent = {s: None}
        depth = {s: 0}
        queue = [s]
        for x in queue:
            if best is not None and 2 * depth[x] + 1 >= len(best):
                break
            for y in sorted(adj[x]):
                if y not in depth:
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    queue.append(y)
                elif parent[x] != y:
                    # cycle through the BFS tree edges of x and y
                    a, b = [x], [y]
                    while a[-1] != b[-1]:
                        if depth[a[-1]] >= depth[b[-1]]:
                            a.append(parent[a[-1]])
                        else:
                            b.append(parent[b[-1]])
                    cyc = a + b[-2::-1]
                    if len(set(cyc)) == len(cyc) and (best is None or len(cyc) < len(best)):
                        best = cyc
    return best


def _fvs_within(adj: dict, b: int) -> set | None:
    adj = _strip(adj)
    if not adj:
        return set()
    if b == 0:
        return None
    cyc = _shortest_cycle(adj)
    for v in sorted(cyc):
        rest = {x: nb - {v} for x, nb in adj.items() if x != v}
        sub = _fvs_within(rest, b - 1)
        if sub is not None:
            return sub | {v}
    return None


def compute_fvs(g: Graph, bound: int) -> frozenset | None:
    """A minimum feedback vertex set if its size is at most ``bound``, else None.

    Branches on the vertices of a shortest cycle after discarding vertices of
    degree at most one; iterative deepening makes the result minimum.
    """
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    for b in range(bound + 1):
        s = _fvs_within(adj, b)
        if s is not None:
            return frozenset(s)
    return None


def is_forest(g: Graph, removed=()) -> bool:
    removed = set(removed)
    adj = {v: set(g.adj[v]) - removed for v in range(g.n) if v not in removed}
    return not _strip(adj)


# ---------------------------------------------------------------- context


@dataclass(frozen=True)
class UsablePath:
    """Forest path (stored with the smaller endpoint first) and its anchor pairs (i <= j)."""

    seq: tuple
    anchors: frozenset = field(compare=False, hash=False)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.seq)


@dataclass(frozen=True)
class CandidatePair:
    avail: frozenset
    hit: frozenset


@dataclass
class FvsContext:
    F: tuple
    adj: tuple  # adjacency of the whole current graph (tuple of frozensets)
    k: int

    def __post_init__(self):
        fs = set(self.F)
        self.forest = tuple(frozenset(nb - fs) if v not in fs else frozenset()
                            for v, nb in enumerate(self.adj))
        self.N = {i: frozenset(self.adj[i] - fs) for i in self.F}
        self.upsilon = upsilon(len(self.F), self.k)
        self.gamma = gamma(len(self.F), self.k)

    @property
    def forest_vertices(self) -> list:
        fs = set(self.F)
        return [v for v in range(len(self.adj)) if v not in fs]


def make_context(g: Graph, F, k: int) -> FvsContext:
    if not is_forest(g, F):
        raise ValueError("F is not a feedback vertex set")
    return FvsContext(tuple(sorted(F)), tuple(g.neighbors(v) for v in range(g.n)), k)


def _graph_from_adj(adj) -> Graph:
    return Graph(len(adj), [(u, v) for u, nb in enumerate(adj) for v in nb if u < v])


def _subtree(forest, root: int, parent: int) -> list:
    out = [root]
    seen = {root, parent}
    for x in out:
        for y in forest[x]:
            if y not in seen:
                seen.add(y)
                out.append(y)
    return out


def _has_pair_path(verts, ni, nj, same: bool) -> bool:
    if same:
        return sum(1 for x in verts if x in ni) >= 2
    return any(x in ni for x in verts) and any(x in nj for x in verts)


def mark_children(ctx: FvsContext, v: int) -> tuple[list, set]:
    """Children of v (as roots of its subtrees) and the marked ones."""
    kids = sorted(ctx.forest[v])
    trees = {x: _subtree(ctx.forest, x, v) for x in kids}
    quota = ctx.k + len(ctx.F) + 2
    marked = set()
    for i, j in product(ctx.F, repeat=2):
        hits = [x for x in kids if x not in marked
                and _has_pair_path(trees[x], ctx.N[i], ctx.N[j], i == j)]
        marked.update(hits[:quota])
    for i in ctx.F:
        hits = [x for x in kids if x not in marked and any(y in ctx.N[i] for y in trees[x])]
        marked.update(hits[:quota])
    return kids, marked


def reduce_degree(inst: Instance, ctx: FvsContext, stats: dict | None = None):
    """Delete leaves of unmarked subtrees until every forest degree is at most Υ."""
    if not set(ctx.F) <= set(inst.undeletable):
        raise ValueError("F must be undeletable before degree reduction")
    adj = [set(nb) for nb in ctx.adj]
    removed = 0
    while True:
        cur = FvsContext(ctx.F, tuple(frozenset(a) for a in adj), ctx.k)
        high = [v for v in cur.forest_vertices if len(cur.forest[v]) > cur.upsilon]
        if not high:
            break
        v = high[0]
        kids, marked = mark_children(cur, v)
        x = next(x for x in kids if x not in marked)
        tree = _subtree(cur.forest, x, v)
        w = min(y for y in tree if len(cur.forest[y]) == 1)
        for y in adj[w]:
            adj[y].discard(w)
        adj[w] = set()
        removed += 1
    if stats is not None:
        stats["reduced_leaves"] = stats.get("reduced_leaves", 0) + removed
    g2 = _graph_from_adj(adj)
    return inst.replace(graph=g2), cur


# ---------------------------------------------------------------- usable paths


def _pruned(ctx: FvsContext, keep: frozenset) -> dict:
    """G^{i,j}: the forest with leaves outside ``keep`` removed repeatedly."""
    adj = {v: set(ctx.forest[v]) for v in ctx.forest_vertices}
    low = [v for v, nb in adj.items() if len(nb) <= 1 and v not in keep]
    while low:
        v = low.pop()
        if v not in adj:
            continue
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) <= 1 and w not in keep:
                low.append(w)
    return adj


def _tree_path(adj: dict, u: int, v: int) -> list | None:
    parent = {u: None}
    queue = [u]
    for x in queue:
        if x == v:
            break
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    if v not in parent:
        return None
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    return path[::-1]


def is_minimal(seq, ni, nj, same: bool) -> bool:
    """No proper subpath is a nontrivial (N_i,N_j), (N_i,N_i) or (N_j,N_j) path.

    Single vertices count only as (N_i,N_j) paths for i != j.
    """
    inner = seq[1:-1]
    if same:
        return len(seq) >= 2 and not any(x in ni for x in inner)
    if len(seq) == 1:
        return True
    if any(x in ni or x in nj for x in inner):
        return False
    return seq[0] not in nj and seq[-1] not in ni


def dist3(adj: dict, seq) -> int:
    return sum(1 for x in seq[1:-1] if len(adj[x]) >= 3)


def default_bound(ctx: FvsContext) -> int:
    """Admissible dist_{>=3} for usable paths: |F| + k + 1.

    Replacing a long path needs a branch tree free of the packing's at most |F|
    paths and of the k solution vertices, hence k more than |F| + 1.
    """
    return len(ctx.F) + ctx.k + 1


def is_usable(ctx: FvsContext, seq, i: int, j: int, bound: int | None = None) -> bool:
    bound = default_bound(ctx) if bound is None else bound
    ni, nj = ctx.N[i], ctx.N[j]
    if not ((seq[0] in ni and seq[-1] in nj) or (seq[0] in nj and seq[-1] in ni)):
        return False
    adj = _pruned(ctx, ni | nj)
    if any(x not in adj for x in seq):
        return False
    if any(seq[a + 1] not in adj[seq[a]] for a in range(len(seq) - 1)):
        return False
    if seq[0] in nj and seq[-1] in ni and not (seq[0] in ni and seq[-1] in nj):
        seq = seq[::-1]
    return is_minimal(seq, ni, nj, i == j) and dist3(adj, seq) <= bound


def usable_paths(ctx: FvsContext, bound: int | None = None) -> list[UsablePath]:
    bound = default_bound(ctx) if bound is None else bound
    found = {}
    for a, i in enumerate(ctx.F):
        for j in ctx.F[a:]:
            ni, nj = ctx.N[i], ctx.N[j]
            adj = _pruned(ctx, ni | nj)
            if i == j:
                ends = list(combinations(sorted(ni), 2))
            else:
                ends = [(u, v) for u in sorted(ni) for v in sorted(nj)]
            for u, v in ends:
                seq = [u] if u == v else _tree_path(adj, u, v)
                if seq is None:
                    continue
                if is_minimal(seq, ni, nj, i == j) and dist3(adj, seq) <= bound:
                    key = tuple(seq) if seq[0] <= seq[-1] else tuple(seq[::-1])
                    found.setdefault(key, set()).add((i, j))
    return [UsablePath(s, frozenset(found[s])) for s in sorted(found)]


# ---------------------------------------------------------------- disjoint paths


def _merge(a: dict, b: dict) -> dict:
    """Subset convolution of witness tables: masks I1 ⊎ I2 with concatenated witnesses."""
    out = {}
    for m1, w1 in a.items():
        for m2, w2 in b.items():
            if m1 & m2 == 0 and (m1 | m2) not in out:
                out[m1 | m2] = w1 + w2
    return out


def find_disjoint_paths(forest: Graph | dict | tuple, collections) -> list | None:
    """One path per collection, pairwise vertex-disjoint, or None.

    Tables follow the tree recursion: T[v] holds the index sets I for which
    the collections in I can be served inside the subtree H_v. Either v is
    unused by a path topped at v (T_child: merge the children's tables) or a
    path P whose top vertex is v serves some i in I while the rest is served
    by the subtrees hanging off P (T_path). The per-tree tables are merged
    across the forest at the end (the cover-path step).
    """
    if isinstance(forest, Graph):
        nbrs = {v: set(forest.adj[v]) for v in range(forest.n)}
    elif isinstance(forest, dict):
        nbrs = {v: set(nb) for v, nb in forest.items()}
    else:
        nbrs = {v: set(nb) for v, nb in enumerate(forest)}
    f = len(collections)
    if f == 0:
        return []
    verts = set(nbrs)
    for col in collections:
        for p in col:
            if any(x not in verts for x in p):
                raise ValueError("path leaves the forest")
    # root every tree at its smallest vertex
    parent, depth, order = {}, {}, []
    for r in sorted(verts):
        if r in parent:
            continue
        parent[r], depth[r] = None, 0
        queue = [r]
        for x in queue:
            order.append(x)
            for y in sorted(nbrs[x]):
                if y not in parent:
                    parent[y], depth[y] = x, depth[x] + 1
                    queue.append(y)
    children = {v: [] for v in verts}
    for v, p in parent.items():
        if p is not None:
            children[p].append(v)
    topped = {v: [] for v in verts}  # (collection index, path) with top vertex v
    for i, col in enumerate(collections):
        for p in col:
            top = min(p, key=lambda x: depth[x])
            topped[top].append((i, tuple(p)))
    table = {}
    for v in reversed(order):
        acc = {0: []}
        for c in children[v]:
            acc = _merge(acc, table[c])
        for i, p in topped[v]:
            on = set(p)
            hang = [c for x in p for c in children[x] if c not in on]
            sub = {0: []}
            for c in hang:
                sub = _merge(sub, table[c])
            bit = 1 << i
            for m, w in sub.items():
                if not m & bit and (m | bit) not in acc:
                    acc[m | bit] = w + [(i, p)]
        table[v] = acc
    total = {0: []}
    for r in sorted(v for v in verts if parent[v] is None):
        total = _merge(total, table[r])
    full = (1 << f) - 1
    if full not in total:
        return None
    out = [None] * f
    for i, p in total[full]:
        out[i] = list(p)
    return out


# ---------------------------------------------------------------- usable packings


@dataclass(frozen=True)
class UsablePacking:
    cycles: tuple  # each a vertex sequence in G
    paths: tuple  # the UsablePath objects used, one per path connector


def _strings(F: tuple, ell: int, adj, avail_pairs: set):
    """Cycle skeletons on F: lists of (F-sequence, connectors) with exactly ell cycles.

    Connector c_s joins seq[s] to seq[s+1 mod r] and is "e" (an edge of G) or
    "p" (a forest path). One-vertex cycles need a path; two-vertex cycles
    cannot close by the same edge twice.
    """

    def ok(a, b, c):
        if c == "e":
            return b in adj[a]
        return (min(a, b), max(a, b)) in avail_pairs

    def cycles_from(m, free):
        others = [x for x in free if x > m]
        for r in range(1, len(others) + 2):
            for rest in permutations(others, r - 1):
                if r >= 3 and rest[0] > rest[-1]:
                    continue
                seq = (m,) + rest
                for conn in product("pe", repeat=r):
                    if r == 1 and conn != ("p",):
                        continue
                    if r == 2 and (conn == ("e", "e") or conn == ("e", "p")):
                        continue
                    if all(ok(seq[s], seq[(s + 1) % r], conn[s]) for s in range(r)):
                        yield seq, conn

    def rec(free, need):
        if need == 0:
            yield []
            return
        for m in free:
            if len(free) < need:
                return
            # m is the smallest F-vertex of the next cycle; smaller ones stay unused
            later = [x for x in free if x > m]
            for cyc in cycles_from(m, free):
                left = [x for x in later if x not in cyc[0]]
                for tail in rec(left, need - 1):
                    yield [cyc] + tail

    yield from rec(list(F), ell)


def find_usable_packing(ctx: FvsContext, avail, ell: int) -> UsablePacking | None:
    """A cycle packing of size ell whose forest paths all come from ``avail``."""
    if ell <= 0:
        return UsablePacking((), ())
    by_pair = {}
    for p in avail:
        for a in p.anchors:
            by_pair.setdefault(a, []).append(p)
    forest = {v: ctx.forest[v] for v in ctx.forest_vertices}
    for skel in _strings(ctx.F, ell, ctx.adj, set(by_pair)):
        slots, cols = [], []
        for seq, conn in skel:
            r = len(seq)
            for s in range(r):
                if conn[s] != "p":
                    continue
                a, b = seq[s], seq[(s + 1) % r]
                col, objs = [], []
                for p in by_pair[(min(a, b), max(a, b))]:
                    # orient the path from N_a to N_b
                    q = p.seq
                    if not (q[0] in ctx.N[a] and q[-1] in ctx.N[b]):
                        q = q[::-1]
                    col.append(list(q))
                    objs.append(p)
                slots.append((seq, s, objs, col))
                cols.append(col)
        if any(not c for c in cols):
            continue
        got = find_disjoint_paths(forest, cols)
        if got is None:
            continue
        chosen = {}
        used = []
        for (seq, s, objs, col), path in zip(slots, got):
            idx = col.index(path)
            chosen[(seq, s)] = path
            used.append(objs[idx])
        cycles = []
        for seq, conn in skel:
            cyc = []
            for s in range(len(seq)):
                cyc.append(seq[s])
                if conn[s] == "p":
                    cyc.extend(chosen[(seq, s)])
            cycles.append(tuple(cyc))
        return UsablePacking(tuple(cycles), tuple(used))
    return None


# ---------------------------------------------------------------- branching


def depth_cap(ctx: FvsContext) -> int:
    return len(ctx.F) ** 2 * ctx.k * ctx.gamma


def _candidates(ctx: FvsContext, all_paths, ell: int, accept=None, stats=None, bound=None):
    """Yield promising candidates depth-first; ``accept(hit)`` may prune subtrees.

    Every node is determined by its hit set (avail is the complement), so
    repeated hit sets are visited once.
    """
    everything = frozenset(all_paths)
    cap = depth_cap(ctx)
    if ctx.k >= 1 and everything:
        assert cap > len(everything), "depth cap must exceed the number of usable paths"
    seen = set()
    stack = [(frozenset(), 0)]
    while stack:
        hit, depth = stack.pop()
        if hit in seen:
            continue
        seen.add(hit)
        assert depth <= cap, "branching depth exceeded |F|^2 k Gamma"
        if stats is not None:
            stats["nodes"] = stats.get("nodes", 0) + 1
        if accept is not None and not accept(hit):
            continue
        avail = everything - hit
        pk = find_usable_packing(ctx, avail, ell)
        if pk is None:
            yield CandidatePair(avail, hit)
            continue
        if depth >= cap:
            continue
        for p in reversed(pk.paths):
            assert any(is_usable(ctx, p.seq, i, j, bound) for i, j in p.anchors)
            stack.append((hit | {p}, depth + 1))


def get_candidates(inst: Instance, ctx: FvsContext, bound: int | None = None) -> list[CandidatePair]:
    if inst.ell == 0:
        return []
    paths = usable_paths(ctx, bound)
    return list(_candidates(ctx, paths, inst.ell, bound=bound))


# ---------------------------------------------------------------- path hitting


def hit_paths_on_forest(forest, undeletable, paths, k: int) -> frozenset | None:
    """X ⊆ V∖U with |X| <= k meeting every path, or None.

    The path whose lowest common ancestor is deepest is hit either at the first
    deletable vertex from the lca towards one end or towards the other.
    """
    if isinstance(forest, Graph):
        nbrs = {v: forest.adj[v] for v in range(forest.n)}
    elif isinstance(forest, dict):
        nbrs = forest
    else:
        nbrs = dict(enumerate(forest))
    und = set(undeletable)
    parent, depth = {}, {}
    for r in sorted(nbrs):
        if r in parent:
            continue
        parent[r], depth[r] = None, 0
        queue = [r]
        for x in queue:
            for y in sorted(nbrs[x]):
                if y not in parent:
                    parent[y], depth[y] = x, depth[x] + 1
                    queue.append(y)
    paths = [tuple(p) for p in paths]
    for p in paths:
        for a in range(len(p) - 1):
            if p[a + 1] not in nbrs[p[a]]:
                raise ValueError("path leaves the forest")

    def top(p):
        return min(p, key=lambda x: depth[x])

    def side(p, lca, end):
        # walk from lca towards end along p
        i, j = p.index(lca), p.index(end)
        step = 1 if j >= i else -1
        for x in p[i:j + step:step] if step == 1 else p[j:i + 1][::-1]:
            if x not in und:
                return x
        return None

    def rec(open_paths, k, chosen):
        open_paths = [p for p in open_paths if not chosen.intersection(p)]
        if not open_paths:
            return frozenset(chosen)
        if k == 0:
            return None
        p = max(open_paths, key=lambda q: (depth[top(q)], q))
        lca = top(p)
        opts = []
        for end in (p[0], p[-1]):
            x = side(p, lca, end)
            if x is not None and x not in opts:
                opts.append(x)
        for x in sorted(opts):
            r = rec(open_paths, k - 1, chosen | {x})
            if r is not None:
                return r
        return None

    return rec(paths, k, frozenset())


# ---------------------------------------------------------------- solver


def solve_cycle_fvs(inst: Instance, stats: dict | None = None, bound: int | None = None,
                    dist_bound=None) -> Verdict:
    """Decide Cycle-HitPack via the FVS pipeline.

    ``bound`` overrides the FVS search limit; ``dist_bound(ctx)`` overrides the
    usable-path distance bound (used to study weaker bounds).
    """
    if not isinstance(inst.family, Cycle):
        raise ValueError("cycle-fvs needs the Cycle family")
    stats = stats if stats is not None else {}
    if inst.ell == 0:
        return Verdict(False)
    g, k, ell = inst.graph, inst.k, inst.ell
    limit = erdos_posa_threshold(k, ell) if bound is None else bound
    F = compute_fvs(g, limit)
    stats["fvs"] = None if F is None else sorted(F)
    if F is None:
        return Verdict(False)
    deletable_f = sorted(set(F) - inst.undeletable)
    for size in range(min(k, len(deletable_f)) + 1):
        for fp in combinations(deletable_f, size):
            adj = [set(nb) for nb in g.adj]
            for x in fp:
                for y in adj[x]:
                    adj[y].discard(x)
                adj[x] = set()
            rest = tuple(x for x in sorted(F) if x not in fp)
            sub = inst.replace(graph=_graph_from_adj(adj),
                               undeletable=inst.undeletable | set(rest), k=k - size)
            ctx = FvsContext(rest, tuple(frozenset(a) for a in adj), k - size)
            sub, ctx = reduce_degree(sub, ctx, stats)
            b = dist_bound(ctx) if dist_bound is not None else None
            paths = usable_paths(ctx, b)
            forest = {v: ctx.forest[v] for v in ctx.forest_vertices}
            und = sub.undeletable

            def accept(hit):
                return hit_paths_on_forest(forest, und, [p.seq for p in hit], ctx.k) is not None

            for cand in _candidates(ctx, paths, ell, accept, stats, b):
                x = hit_paths_on_forest(forest, und, [p.seq for p in cand.hit], ctx.k)
                if x is not None:
                    return Verdict(True, frozenset(fp) | x)
    return Verdict(False)
