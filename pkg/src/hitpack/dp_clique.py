"""Tree-decomposition DP for Clique(q)-HitPack (q = 2 covers Edge-HitPack).

A class at node t is (k0, D0, f0): k0 deletions among forgotten vertices, D0
the deleted bag vertices, and f0(A) the q-clique packing number of
G_t - (D ∪ A) for every A ⊆ X_t ∖ D0. Each node keeps the list of classes
that some deletion set realizes, deduplicated by (k0, D0, f0).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from hitpack.graph_core import Graph, Instance, Verdict, clique_size
from hitpack.treewidth import FORGET, INTRO, INTRO_EDGE, JOIN, LEAF, NiceDecomposition


@dataclass(frozen=True)
class CliqueClass:
    k0: int
    d0: frozenset
    free: tuple  # sorted bag vertices outside D0; bit i of a mask is free[i]
    vals: tuple  # vals[mask] = f0(A)

    def f(self, a=()) -> int:
        return self.vals[_mask(self.free, a)]

    @property
    def key(self):
        return (self.k0, self.d0, self.free, self.vals)

    def spread(self) -> int:
        return max(self.vals) - min(self.vals)


def _mask(free: tuple, a) -> int:
    pos = {v: i for i, v in enumerate(free)}
    return sum(1 << pos[x] for x in a)


def leaf_class() -> CliqueClass:
    return CliqueClass(0, frozenset(), (), (0,))


def clique_intro(cls: CliqueClass, v: int, deleted: bool, g: Graph, q: int) -> CliqueClass:
    """Introduce v into the bag; cliques through v may use kept bag vertices only."""
    if deleted:
        return CliqueClass(cls.k0, cls.d0 | {v}, cls.free, cls.vals)
    old = cls.free
    new = tuple(sorted(old + (v,)))
    iv = new.index(v)
    vbit = 1 << iv
    # old index -> new index
    shift = [new.index(x) for x in old]
    nbrs = [i for i, x in enumerate(old) if g.has_edge(v, x)]
    cl = []
    for c in combinations(nbrs, q - 1):
        if all(g.has_edge(old[a], old[b]) for a, b in combinations(c, 2)):
            cl.append(sum(1 << a for a in c))
    size = 1 << len(new)
    vals = [0] * size
    for mnew in range(size):
        mold = 0
        for i, j in enumerate(shift):
            if mnew >> j & 1:
                mold |= 1 << i
        if mnew & vbit:
            vals[mnew] = cls.vals[mold]
            continue
        best = cls.vals[mold]
        for c in cl:
            if c & mold == 0:
                best = max(best, 1 + cls.vals[mold | c])
        vals[mnew] = best
    return CliqueClass(cls.k0, cls.d0, new, tuple(vals))


def clique_forget(cls: CliqueClass, v: int, was_deleted: bool) -> CliqueClass:
    if was_deleted:
        return CliqueClass(cls.k0 + 1, cls.d0 - {v}, cls.free, cls.vals)
    iv = cls.free.index(v)
    new = cls.free[:iv] + cls.free[iv + 1:]
    low = (1 << iv) - 1
    vals = tuple(cls.vals[(m & low) | ((m & ~low) << 1)] for m in range(1 << len(new)))
    return CliqueClass(cls.k0, cls.d0, new, vals)


def clique_join(c1: CliqueClass, c2: CliqueClass) -> CliqueClass:
    """f0(A) = max over A1 ⊎ A2 = X ∖ (D0 ∪ A) of f1(A ∪ A1) + f2(A ∪ A2)."""
    if c1.d0 != c2.d0 or c1.free != c2.free:
        raise ValueError("join needs classes with the same deleted bag set")
    full = (1 << len(c1.free)) - 1
    vals = []
    for a in range(full + 1):
        rest = full & ~a
        best = -1
        sub = rest
        while True:
            best = max(best, c1.vals[a | sub] + c2.vals[a | (rest & ~sub)])
            if sub == 0:
                break
            sub = (sub - 1) & rest
        vals.append(best)
    return CliqueClass(c1.k0 + c2.k0, c1.d0, c1.free, tuple(vals))


def clique_classes(inst: Instance, nd: NiceDecomposition, stats: dict | None = None):
    """Root class list as a dict key -> (class, representative deletion set)."""
    q = clique_size(inst.family)
    if q is None:
        raise ValueError("dp-clique needs the Edge or Clique family")
    g, k, ell, und = inst.graph, inst.k, inst.ell, inst.undeletable
    stats = stats if stats is not None else {}
    stats.setdefault("classes", 0)
    tables = [None] * len(nd)

    def keep(table, c, rep):
        # k0 only grows and f0(∅) only grows towards the root
        assert c.spread() <= len(c.free), "spread bound violated"
        if c.k0 + len(c.d0) > k or c.vals[0] >= ell:
            return
        if c.key not in table:
            table[c.key] = (c, rep)

    for t in range(len(nd)):
        kind = nd.kind[t]
        out = {}
        if kind == LEAF:
            keep(out, leaf_class(), frozenset())
        elif kind == INTRO:
            v = nd.arg[t]
            for c, rep in tables[nd.children[t][0]].values():
                keep(out, clique_intro(c, v, False, g, q), rep)
                if v not in und:
                    keep(out, clique_intro(c, v, True, g, q), rep | {v})
        elif kind == FORGET:
            v = nd.arg[t]
            for c, rep in tables[nd.children[t][0]].values():
                keep(out, clique_forget(c, v, v in c.d0), rep)
        elif kind == JOIN:
            a, b = nd.children[t]
            by_d = {}
            for c, rep in tables[b].values():
                by_d.setdefault(c.d0, []).append((c, rep))
            for c1, r1 in tables[a].values():
                for c2, r2 in by_d.get(c1.d0, ()):
                    keep(out, clique_join(c1, c2), r1 | r2)
        elif kind == INTRO_EDGE:
            out = tables[nd.children[t][0]]
        else:
            raise ValueError(f"unknown node kind {kind}")
        stats["classes"] += len(out)
        tables[t] = out
        for c in nd.children[t]:
            tables[c] = None
    return tables[nd.root]


def solve_clique_dp(inst: Instance, nd: NiceDecomposition, stats: dict | None = None) -> Verdict:
    if clique_size(inst.family) is None:
        raise ValueError("dp-clique needs the Edge or Clique family")
    if inst.ell == 0:
        return Verdict(False)
    root = clique_classes(inst, nd, stats)
    best = None
    for c, rep in root.values():
        if c.k0 <= inst.k and c.vals[0] <= inst.ell - 1:
            if best is None or len(rep) < len(best):
                best = rep
    return Verdict(True, best) if best is not None else Verdict(False)
