"""Tree-decomposition DP for Subgraph(H)-HitPack with solution counting.

A type records how a partial packing meets the bag. Every bag vertex is
either uncovered (part 0) or belongs to exactly one partial copy of H. A
partial copy is stored as a tuple indexed by V(H) whose entries are a bag
vertex, ``UP`` (not placed inside G_t) or ``DOWN`` (placed on an already
forgotten vertex). Copies are counted as complete when their last bag vertex
is forgotten.

A class at node t is (k0, D0, l0, f0) where l0 is the packing number of
G_t - D and f0 maps each realizable D0-avoiding type to its deficit
l0 - (best number of complete copies with that type). Tables map class keys
to the number of deletion sets S ∩ V_t that produce them, which makes the
root sum the number of solutions.
"""

from __future__ import annotations

from functools import lru_cache

from hitpack.graph_core import Graph, Instance, Subgraph, Verdict
from hitpack.packing_oracle import embeddings
from hitpack.treewidth import FORGET, INTRO, INTRO_EDGE, JOIN, LEAF, NiceDecomposition

UP = -1
DOWN = -2

TW_LIMIT = 6
H_LIMIT = 6


class TooLargeError(ValueError):
    """Instance outside the intended scale of the DP."""


def automorphisms(h: Graph) -> tuple:
    return tuple(sorted(embeddings(h, h)))


@lru_cache(maxsize=1 << 20)
def _least_image(p: tuple, auts: tuple) -> tuple:
    return min(tuple(p[a] for a in s) for s in auts)


def _part_canon(p: tuple, auts) -> tuple:
    return _least_image(p, auts) if auts else p


def _canon(parts, auts=None) -> tuple:
    """Parts sorted by smallest bag vertex, each replaced by its least image under Aut(H).

    Two partial copies that differ by an automorphism of H admit the same
    completions, so identifying them loses nothing.
    """
    parts = [_part_canon(p, auts) for p in parts]
    return tuple(sorted(parts, key=lambda p: min(x for x in p if x >= 0)))


def covered(t: tuple) -> set:
    return {x for p in t for x in p if x >= 0}


def extend_type(t: tuple, v: int, i: int, g: Graph, h: Graph, auts=None) -> set:
    """Types obtained by adding bag vertex v as uncovered (i = 0), to part i, or to a new part.

    Parts are numbered 1..w in canonical order; i = w + 1 starts a new part.
    """
    w = len(t)
    if not 0 <= i <= w + 1:
        raise ValueError("part index out of range")
    if i == 0:
        return {t}
    if i == w + 1:
        out = set()
        for a in range(h.n):
            p = [UP] * h.n
            p[a] = v
            out.add(_canon(t + (tuple(p),), auts))
        return out
    part = t[i - 1]
    out = set()
    for a in range(h.n):
        if part[a] != UP:
            continue
        ok = True
        for b in h.adj[a]:
            x = part[b]
            if x == DOWN or (x >= 0 and not g.has_edge(v, x)):
                ok = False
                break
        if ok:
            p = list(part)
            p[a] = v
            out.add(_canon(t[:i - 1] + (tuple(p),) + t[i:], auts))
    return out


def remove_type(t: tuple, v: int, h: Graph, auts=None) -> tuple | None:
    """(type without v, completed copies) or None if forgetting v is impossible.

    An H-vertex placed on v must have no neighbour still UP: the later image
    of that neighbour could never be adjacent to a forgotten vertex.
    """
    for idx, part in enumerate(t):
        if v not in part:
            continue
        a = part.index(v)
        if any(part[b] == UP for b in h.adj[a]):
            return None
        p = list(part)
        p[a] = DOWN
        rest = t[:idx] + t[idx + 1:]
        if any(x >= 0 for x in p):
            return _canon(rest + (tuple(p),), auts), 0
        if any(x == UP for x in p):
            return None
        return rest, 1
    return t, 0


def _glue(p: tuple, q: tuple) -> tuple | None:
    r = []
    for x, y in zip(p, q):
        if x >= 0 or y >= 0:
            if x != y:
                return None
            r.append(x)
        elif x == DOWN and y == DOWN:
            return None
        elif x == DOWN or y == DOWN:
            r.append(DOWN)
        else:
            r.append(UP)
    return tuple(r)


def combine_types(t1: tuple, t2: tuple, auts=None) -> set:
    """All types gluing the partial packings of two join children (empty if inconsistent).

    Both sides must cover the same bag vertices with the same parts; an
    H-vertex may be DOWN on at most one side. Without automorphisms the
    result has at most one element.
    """
    if len(t1) != len(t2):
        return set()
    options = []
    for p, q in zip(t1, t2):
        opts = set()
        for s in (auts or [tuple(range(len(q)))]):
            r = _glue(p, tuple(q[s[a]] for a in range(len(q))))
            if r is not None:
                opts.add(r)
        if not opts:
            return set()
        options.append(opts)
    out = {()}
    for opts in options:
        out = {o + (r,) for o in out for r in opts}
    return {_canon(o, auts) for o in out}


def _bag_key(t: tuple) -> tuple:
    return tuple(frozenset(x for x in p if x >= 0) for p in t)


def _push(table: dict, key, cnt: int) -> None:
    table[key] = table.get(key, 0) + cnt


def _normalize(k0, d0, vals: dict):
    if not vals:
        return None
    l0 = max(vals.values())
    return (k0, d0, l0, frozenset((t, l0 - c) for t, c in vals.items()))


def estimate_types(bag: int, hn: int) -> int:
    """Crude upper bound on the number of types for one bag."""
    return (hn + 2) ** (bag * hn)


def hgraph_table(inst: Instance, nd: NiceDecomposition, stats: dict | None = None,
                 use_automorphisms: bool = True) -> dict:
    if not isinstance(inst.family, Subgraph):
        raise ValueError("dp-h needs the Subgraph family")
    h = inst.family.h
    if h.n < 2:
        raise ValueError("dp-h needs |V(H)| >= 2")
    tw = nd.width
    if tw > TW_LIMIT or h.n > H_LIMIT:
        raise TooLargeError(
            f"width {tw} with |V(H)|={h.n}: up to {estimate_types(tw + 1, h.n)} types per bag; "
            f"limits are width {TW_LIMIT}, |V(H)| {H_LIMIT}")
    auts = automorphisms(h) if use_automorphisms else None
    g, k, ell, und = inst.graph, inst.k, inst.ell, inst.undeletable
    r_bound = (tw + 1) * h.n
    stats = stats if stats is not None else {}
    stats.setdefault("classes", 0)
    tables = [None] * len(nd)
    below = [0] * len(nd)  # bitmask of vertices introduced in each subtree
    nbmask = [sum(1 << w for w in g.adj[x]) for x in range(g.n)]
    viable = {}

    def alive(ty) -> bool:
        """False if some part needs a future neighbour of a bag vertex that has none.

        Such a part can never be completed, so its bag vertices could never be
        forgotten; dropping the type early changes no value at the root.
        """
        r = viable.get(ty)
        if r is None:
            r = True
            for p in ty:
                for a, x in enumerate(p):
                    if x >= 0 and not nbmask[x] & ~cur_below:
                        if any(p[b] == UP for b in h.adj[a]):
                            r = False
                            break
                if not r:
                    break
            viable[ty] = r
        return r

    def add(out, k0, d0, vals, cnt):
        if k0 + len(d0) > k:
            return
        vals = {ty: c for ty, c in vals.items() if alive(ty)}
        # copies already placed entirely inside the bag are real copies in
        # G_t - D, and the packing number of G_t - D only grows towards the root
        if any(c + sum(UP not in p for p in ty) >= ell for ty, c in vals.items()):
            return
        key = _normalize(k0, d0, vals)
        if key is None:
            return
        assert all(0 <= d <= r_bound for _, d in key[3]), "deficit out of range"
        _push(out, key, cnt)

    for t in range(len(nd)):
        kind = nd.kind[t]
        out = {}
        cur_below = 0
        for c in nd.children[t]:
            cur_below |= below[c]
        if kind == INTRO:
            cur_below |= 1 << nd.arg[t]
        below[t] = cur_below
        viable.clear()
        if kind == LEAF:
            add(out, 0, frozenset(), {(): 0}, 1)
        elif kind == INTRO:
            v = nd.arg[t]
            cache = {}
            for (k0, d0, l0, f), cnt in tables[nd.children[t][0]].items():
                vals = {}
                for ty, d in f:
                    ext = cache.get(ty)
                    if ext is None:
                        ext = set()
                        for i in range(len(ty) + 2):
                            ext |= extend_type(ty, v, i, g, h, auts)
                        cache[ty] = ext
                    c = l0 - d
                    for nt in ext:
                        if vals.get(nt, -1) < c:
                            vals[nt] = c
                add(out, k0, d0, vals, cnt)
                if v not in und:
                    add(out, k0, d0 | {v}, {ty: l0 - d for ty, d in f}, cnt)
        elif kind == FORGET:
            v = nd.arg[t]
            cache = {}
            for (k0, d0, l0, f), cnt in tables[nd.children[t][0]].items():
                if v in d0:
                    add(out, k0 + 1, d0 - {v}, {ty: l0 - d for ty, d in f}, cnt)
                    continue
                vals = {}
                for ty, d in f:
                    if ty not in cache:
                        cache[ty] = remove_type(ty, v, h, auts)
                    r = cache[ty]
                    if r is None:
                        continue
                    nt, done = r
                    c = l0 - d + done
                    if vals.get(nt, -1) < c:
                        vals[nt] = c
                add(out, k0, d0, vals, cnt)
        elif kind == JOIN:
            a, b = nd.children[t]
            by_d = {}
            groups = {}
            for key, cnt in tables[b].items():
                by_d.setdefault(key[1], []).append((key, cnt))
                grp = {}
                for ty, e in key[3]:
                    grp.setdefault(_bag_key(ty), []).append((ty, e))
                groups[key] = grp
            cache = {}
            for (k1, d0, l1, f1), c1 in tables[a].items():
                for key2, c2 in by_d.get(d0, ()):
                    k2, _, l2, _ = key2
                    grp = groups[key2]
                    vals = {}
                    for t1, e1 in f1:
                        for t2, e2 in grp.get(_bag_key(t1), ()):
                            pair = (t1, t2)
                            res = cache.get(pair)
                            if res is None:
                                res = cache[pair] = combine_types(t1, t2, auts)
                            c = l1 - e1 + l2 - e2
                            for nt in res:
                                if vals.get(nt, -1) < c:
                                    vals[nt] = c
                    add(out, k1 + k2, d0, vals, c1 * c2)
        elif kind == INTRO_EDGE:
            out = tables[nd.children[t][0]]
        else:
            raise ValueError(f"unknown node kind {kind}")
        stats["classes"] += len(out)
        tables[t] = out
        for c in nd.children[t]:
            tables[c] = None
    return tables[nd.root]


def solve_hgraph_dp(inst: Instance, nd: NiceDecomposition, stats: dict | None = None,
                    use_automorphisms: bool = True):
    """(number of solution sets, verdict)."""
    if not isinstance(inst.family, Subgraph):
        raise ValueError("dp-h needs the Subgraph family")
    if inst.ell == 0:
        return 0, Verdict(False)
    root = hgraph_table(inst, nd, stats, use_automorphisms)
    count = sum(cnt for (k0, _, l0, _), cnt in root.items() if k0 <= inst.k and l0 <= inst.ell - 1)
    return count, Verdict(count > 0)
