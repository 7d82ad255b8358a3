"""Tree-decomposition DP for Cycle-HitPack over nice decompositions with edge nodes.

A partial packing below node t is a set of disjoint cycles and paths in G_t.
Its type is (Y2, M): Y2 holds bag vertices of degree two, M pairs up the
degree-one bag vertices that are the two ends of the same path, and the rest
of the bag (Y0) is untouched. A class is (k0, D0, l0, f0) with f0 mapping each
realizable type to l0 minus the best number of closed cycles, or to LOW when
that deficit exceeds 2(tw+1). Low entries can never be part of an optimal
packing's history, so their exact values are not tracked.
"""

from __future__ import annotations

from hitpack.graph_core import Cycle, Instance, Verdict
from hitpack.treewidth import FORGET, INTRO, INTRO_EDGE, JOIN, LEAF, NiceDecomposition

LOW = -1  # the "suboptimal" marker
EMPTY = ((), ())


def _pairs(m) -> tuple:
    return tuple(sorted((min(a, b), max(a, b)) for a, b in m))


def reduce_matching(m, lam: int = 0):
    """Join paths that share an end; a pair meeting its own twin closes a cycle.

    Returns (pairs, lam + closed cycles). Input pairs form a multiset.
    """
    pairs = [tuple(p) for p in m]
    lam_out = lam
    while True:
        inc = {}
        hit = None
        for idx, (a, b) in enumerate(pairs):
            for x in (a, b):
                if x in inc:
                    hit = (inc[x], idx, x)
                    break
                inc[x] = idx
            if hit:
                break
        if hit is None:
            return _pairs(pairs), lam_out
        i, j, x = hit
        (a1, b1), (a2, b2) = pairs[i], pairs[j]
        o1 = b1 if a1 == x else a1
        o2 = b2 if a2 == x else a2
        rest = [p for k, p in enumerate(pairs) if k not in (i, j)]
        if o1 == o2:
            lam_out += 1
        else:
            rest.append((o1, o2))
        pairs = rest


def type_sets(t, bag) -> tuple:
    """(Y0, Y1, Y2) of a type over a bag."""
    y2 = set(t[0])
    y1 = {x for p in t[1] for x in p}
    return set(bag) - y1 - y2, y1, y2


def combine_cycle_types(t1, t2, bag):
    """Glue two join-children types, or None when a vertex would get degree three."""
    y0a, y1a, y2a = type_sets(t1, bag)
    y0b, y1b, y2b = type_sets(t2, bag)
    if not y2a <= y0b or not y2b <= y0a:
        return None
    y2 = y2a | y2b | (y1a & y1b)
    ma, mb = set(t1[1]), set(t2[1])
    m, lam = reduce_matching(list(ma ^ mb), len(ma & mb))
    return (tuple(sorted(y2 | {x for p in ma & mb for x in p})), m), lam


def _edge_moves(t, u, v):
    """Types reachable by putting edge uv into the partial packing, with cycles closed."""
    y2 = set(t[0])
    m = list(t[1])
    if u in y2 or v in y2:
        return []
    partner = {}
    for a, b in m:
        partner[a] = b
        partner[b] = a
    pu, pv = partner.get(u), partner.get(v)
    if pu is None and pv is None:
        return [((t[0], _pairs(m + [(u, v)])), 0)]
    if pu is None or pv is None:
        end, mid = (u, v) if pu is None else (v, u)
        y = partner[mid]
        rest = [p for p in m if mid not in p] + [(end, y)]
        return [((tuple(sorted(y2 | {mid})), _pairs(rest)), 0)]
    if pu == v:
        rest = [p for p in m if u not in p]
        return [((tuple(sorted(y2 | {u, v})), _pairs(rest)), 1)]
    rest = [p for p in m if u not in p and v not in p] + [(pu, pv)]
    return [((tuple(sorted(y2 | {u, v})), _pairs(rest)), 0)]


def _forget_type(t, v):
    y2, m = t
    if any(v in p for p in m):
        return None
    return (tuple(x for x in y2 if x != v), m)


def cycle_classes(inst: Instance, nd: NiceDecomposition, stats: dict | None = None) -> set:
    if not isinstance(inst.family, Cycle):
        raise ValueError("dp-cycle needs the Cycle family")
    if inst.graph.m and not nd.has_edges:
        raise ValueError("dp-cycle needs a decomposition with edge nodes")
    k, ell, und = inst.k, inst.ell, inst.undeletable
    cap = 2 * (nd.width + 1)
    stats = stats if stats is not None else {}
    stats.setdefault("classes", 0)
    tables = [None] * len(nd)

    def add(out, k0, d0, vals):
        """vals: type -> absolute value or LOW; numbers beat LOW."""
        if k0 + len(d0) > k:
            return
        nums = [c for c in vals.values() if c != LOW]
        if not nums:
            return
        l0 = max(nums)
        if l0 >= ell:
            return
        f = frozenset((ty, LOW if c == LOW or l0 - c > cap else l0 - c) for ty, c in vals.items())
        out.add((k0, d0, l0, f))

    def put(vals, ty, c):
        old = vals.get(ty)
        if old is None or old == LOW or (c != LOW and c > old):
            vals[ty] = c

    def absval(l0, d):
        return LOW if d == LOW else l0 - d

    for t in range(len(nd)):
        kind = nd.kind[t]
        out = set()
        if kind == LEAF:
            add(out, 0, frozenset(), {EMPTY: 0})
        elif kind == INTRO:
            v = nd.arg[t]
            for k0, d0, l0, f in tables[nd.children[t][0]]:
                vals = {ty: absval(l0, d) for ty, d in f}
                add(out, k0, d0, vals)
                if v not in und:
                    add(out, k0, d0 | {v}, vals)
        elif kind == INTRO_EDGE:
            u, v = nd.arg[t]
            for k0, d0, l0, f in tables[nd.children[t][0]]:
                vals = {}
                for ty, d in f:
                    c = absval(l0, d)
                    put(vals, ty, c)  # case 0: edge unused
                    if u in d0 or v in d0:
                        continue
                    for nt, gain in _edge_moves(ty, u, v):
                        put(vals, nt, c if c == LOW else c + gain)
                add(out, k0, d0, vals)
        elif kind == FORGET:
            v = nd.arg[t]
            for k0, d0, l0, f in tables[nd.children[t][0]]:
                vals = {}
                for ty, d in f:
                    nt = _forget_type(ty, v)
                    if nt is not None:
                        put(vals, nt, absval(l0, d))
                if v in d0:
                    add(out, k0 + 1, d0 - {v}, vals)
                else:
                    add(out, k0, d0, vals)
        elif kind == JOIN:
            a, b = nd.children[t]
            bag = nd.bag[t]
            by_d = {}
            for cls in tables[b]:
                by_d.setdefault(cls[1], []).append(cls)
            cache = {}
            for k1, d0, l1, f1 in tables[a]:
                for k2, _, l2, f2 in by_d.get(d0, ()):
                    vals = {}
                    for t1, e1 in f1:
                        for t2, e2 in f2:
                            key = (t1, t2)
                            if key not in cache:
                                cache[key] = combine_cycle_types(t1, t2, bag)
                            r = cache[key]
                            if r is None:
                                continue
                            nt, lam = r
                            if e1 == LOW or e2 == LOW:
                                put(vals, nt, LOW)
                            else:
                                put(vals, nt, l1 - e1 + l2 - e2 + lam)
                    add(out, k1 + k2, d0, vals)
        else:
            raise ValueError(f"unknown node kind {kind}")
        stats["classes"] += len(out)
        tables[t] = out
        for c in nd.children[t]:
            tables[c] = None
    return tables[nd.root]


def solve_cycle_dp(inst: Instance, nd: NiceDecomposition, stats: dict | None = None) -> Verdict:
    if not isinstance(inst.family, Cycle):
        raise ValueError("dp-cycle needs the Cycle family")
    if inst.ell == 0:
        return Verdict(False)
    root = cycle_classes(inst, nd, stats)
    ok = any(k0 <= inst.k and l0 <= inst.ell - 1 for k0, _, l0, _ in root)
    return Verdict(ok)
