"""Exact maximum packings and the exhaustive HitPack oracle.

Objects of G - X are exactly the objects of G avoiding X: this holds for
cliques, for vertex sets spanning a copy of H, and for chordless cycles (an
induced cycle of an induced subgraph is induced in G). So every search below
enumerates objects once and then works on bitmasks of surviving vertices.
"""

from __future__ import annotations

from itertools import combinations

from hitpack.graph_core import Cycle, Graph, Instance, Subgraph, Verdict, clique_size


def _cliques(g: Graph, q: int) -> list[tuple[int, ...]]:
    out = []

    def grow(cur: list[int], cand: list[int]) -> None:
        if len(cur) == q:
            out.append(tuple(cur))
            return
        for i, w in enumerate(cand):
            nw = g.neighbors(w)
            grow(cur + [w], [x for x in cand[i + 1:] if x in nw])

    grow([], list(range(g.n)))
    return out


def embeddings(g: Graph, h: Graph, within=None):
    """Yield injective homomorphisms H -> G as tuples indexed by V(H)."""
    if h.n == 0:
        yield ()
        return
    # BFS order of H so every later vertex has an earlier neighbour
    order, seen = [0], {0}
    for a in order:
        for b in h.adj[a]:
            if b not in seen:
                seen.add(b)
                order.append(b)
    if len(order) != h.n:
        raise ValueError("H must be connected")
    anchor = {}
    for i, a in enumerate(order[1:], 1):
        anchor[a] = next(b for b in order[:i] if h.has_edge(a, b))
    pool = range(g.n) if within is None else sorted(within)
    allowed = None if within is None else frozenset(within)
    img = [-1] * h.n
    used = set()

    def rec(i: int):
        if i == len(order):
            yield tuple(img)
            return
        a = order[i]
        cands = pool if i == 0 else g.adj[img[anchor[a]]]
        for x in cands:
            if x in used or (allowed is not None and x not in allowed):
                continue
            if all(img[b] == -1 or g.has_edge(x, img[b]) for b in h.adj[a]):
                img[a] = x
                used.add(x)
                yield from rec(i + 1)
                used.discard(x)
                img[a] = -1

    yield from rec(0)


def _copies(g: Graph, h: Graph) -> list[tuple[int, ...]]:
    sets = {frozenset(e) for e in embeddings(g, h)}
    return sorted(tuple(sorted(s)) for s in sets)


def chordless_cycles_through(g: Graph, v: int, floor: int = 0) -> list[tuple[int, ...]]:
    """Chordless cycles through v using only vertices >= floor, each once."""
    out = []
    path = [v]
    on = {v}

    def ext() -> None:
        last = path[-1]
        for w in g.adj[last]:
            if w < floor or w in on:
                continue
            nw = g.neighbors(w)
            # w may touch only the last path vertex (and v when closing)
            if any(p in nw for p in path[1:-1]):
                continue
            if v in nw and len(path) >= 2:
                if path[1] < w:
                    out.append(tuple(path) + (w,))
                continue
            if v in nw:
                continue
            path.append(w)
            on.add(w)
            ext()
            on.discard(w)
            path.pop()

    for p1 in g.adj[v]:
        if p1 < floor:
            continue
        path.append(p1)
        on.add(p1)
        ext()
        on.discard(p1)
        path.pop()
    out.sort(key=lambda c: (len(c), c))
    return out


def chordless_cycles(g: Graph) -> list[tuple[int, ...]]:
    out = []
    for v in range(g.n):
        out += chordless_cycles_through(g, v, floor=v)
    out.sort(key=lambda c: (len(c), c))
    return out


def enumerate_copies(g: Graph, family, through: int | None = None) -> list[tuple[int, ...]]:
    """All objects of the family in g (optionally through one vertex), duplicate-free.

    Cliques and H-copies are sorted vertex tuples; cycles are cyclic sequences
    of chordless cycles, shortest first.
    """
    if isinstance(family, Cycle):
        if through is not None:
            return chordless_cycles_through(g, through)
        return chordless_cycles(g)
    q = clique_size(family)
    objs = _cliques(g, q) if q is not None else _copies(g, family.h)
    if through is not None:
        objs = [o for o in objs if through in o]
    return objs


def is_valid_packing(g: Graph, family, objects) -> bool:
    """Objects pairwise disjoint and each a genuine member of the family in g."""
    used = set()
    for obj in objects:
        s = set(obj)
        if len(s) != len(obj) or s & used or any(not 0 <= x < g.n for x in s):
            return False
        used |= s
        if isinstance(family, Cycle):
            if len(obj) < 3:
                return False
            if any(not g.has_edge(obj[i], obj[(i + 1) % len(obj)]) for i in range(len(obj))):
                return False
        elif isinstance(family, Subgraph):
            if len(s) != family.h.n or next(embeddings(g, family.h, s), None) is None:
                return False
        else:
            q = clique_size(family)
            if len(s) != q or any(not g.has_edge(a, b) for a, b in combinations(obj, 2)):
                return False
    return True


class Packer:
    """Branch-and-bound maximum packing over bitmasks of surviving vertices.

    Each state drops vertices outside the live objects, splits into
    independent parts, and branches on the vertex in the fewest live objects:
    one of its objects is packed, or the vertex stays unused.
    """

    def __init__(self, g: Graph, family):
        self.g = g
        self.family = family
        self.objects = enumerate_copies(g, family)
        self.masks = [sum(1 << x for x in o) for o in self.objects]
        self.by_vertex = [[] for _ in range(g.n)]
        for i, o in enumerate(self.objects):
            for x in o:
                self.by_vertex[x].append(i)
        self.minsize = min((len(o) for o in self.objects), default=1)
        self.full = (1 << g.n) - 1
        self._memo = {}

    def best(self, alive: int | None = None) -> int:
        """Maximum number of disjoint objects inside ``alive``."""
        if alive is None:
            alive = self.full
        if alive in self._memo:
            return self._memo[alive]
        live = [i for i, m in enumerate(self.masks) if m & alive == m]
        val = self._solve(alive, live)
        self._memo[alive] = val
        return val

    def _solve(self, alive: int, live: list[int]) -> int:
        # live: the objects inside alive
        masks, memo = self.masks, self._memo
        if not live:
            return 0
        cover = 0
        for i in live:
            cover |= masks[i]
        alive = cover  # vertices in no live object are irrelevant
        if alive in memo:
            return memo[alive]
        # independent parts of the object hypergraph are solved separately
        part = masks[live[0]]
        rest = live[1:]
        while True:
            touch, keep = [], []
            for i in rest:
                (touch if masks[i] & part else keep).append(i)
            if not touch:
                break
            for i in touch:
                part |= masks[i]
            rest = keep
        if rest:
            inner = [i for i in live if masks[i] & part]
            val = self._solve(part, inner) + self._solve(alive & ~part, rest)
            memo[alive] = val
            return val
        count = {}
        for i in live:
            for x in self.objects[i]:
                count[x] = count.get(x, 0) + 1
        ub = bin(alive).count("1") // self.minsize
        v = min(count, key=lambda x: (count[x], x))
        bit = 1 << v
        val = 0
        for i in live:
            m = masks[i]
            if m & bit:
                val = max(val, 1 + self._solve(alive & ~m, [j for j in live if not masks[j] & m]))
                if val >= ub:
                    break
        if val < ub:
            val = max(val, self._solve(alive & ~bit, [i for i in live if not masks[i] & bit]))
        memo[alive] = val
        return val

    def find(self, target: int, alive: int | None = None) -> list[tuple[int, ...]] | None:
        """``target`` disjoint objects inside ``alive``, or None."""
        if alive is None:
            alive = self.full
        if target <= 0:
            return []
        if self.best(alive) < target:
            return None
        out = []
        while len(out) < target:
            # pick any object whose removal keeps enough room for the rest
            need = target - len(out) - 1
            for i, m in enumerate(self.masks):
                if m & alive == m and self.best(alive & ~m) >= need:
                    out.append(self.objects[i])
                    alive &= ~m
                    break
        return out

    def all_packings(self, size: int, alive: int | None = None) -> list[list[tuple[int, ...]]]:
        """Every set of ``size`` disjoint objects inside ``alive`` (as sorted lists)."""
        if alive is None:
            alive = self.full
        out = []

        def rec(start: int, alive: int, cur: list[int]) -> None:
            if len(cur) == size:
                out.append([self.objects[i] for i in cur])
                return
            if self.best(alive) < size - len(cur):
                return
            for i in range(start, len(self.masks)):
                m = self.masks[i]
                if m & alive == m:
                    cur.append(i)
                    rec(i + 1, alive & ~m, cur)
                    cur.pop()

        rec(0, alive, [])
        return out


def max_packing(g: Graph, family) -> int:
    return Packer(g, family).best()


def find_packing(g: Graph, family, target: int) -> list[tuple[int, ...]] | None:
    return Packer(g, family).find(target)


def _solutions(inst: Instance):
    """Yield every S ⊆ V∖U with |S| ≤ k and fewer than l objects in G - S, by size."""
    pk = Packer(inst.graph, inst.family)
    dele = inst.deletable
    for s in range(min(inst.k, len(dele)) + 1):
        for S in combinations(dele, s):
            alive = pk.full & ~sum(1 << x for x in S)
            if pk.best(alive) < inst.ell:
                yield frozenset(S)


def brute_hitpack(inst: Instance) -> Verdict:
    for S in _solutions(inst):
        return Verdict(True, S)
    return Verdict(False)


def brute_count(inst: Instance) -> int:
    """Number of solution sets S (each counted once, any size up to k)."""
    return sum(1 for _ in _solutions(inst))


def check_solution(inst: Instance, s) -> bool:
    """S ⊆ V∖U, |S| ≤ k and max packing of G - S below l."""
    s = set(s)
    if len(s) > inst.k or s & inst.undeletable or any(not 0 <= x < inst.graph.n for x in s):
        return False
    pk = Packer(inst.graph, inst.family)
    return pk.best(pk.full & ~sum(1 << x for x in s)) < inst.ell
