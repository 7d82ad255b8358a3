"""Tree decompositions: PACE I/O, validation, computation and nice form.

Small graphs (n <= 16) get an exact elimination ordering from a DP over
eliminated vertex subsets, pruned by the min-fill upper bound. Larger graphs
use the min-fill ordering directly.
"""

from __future__ import annotations

from dataclasses import dataclass

from hitpack.graph_core import Graph

EXACT_LIMIT = 16


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    n: int  # vertices of the decomposed graph
    bags: tuple  # tuple of frozensets
    edges: tuple  # tree edges (a, b) between bag indices

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


def validate(td: TreeDecomposition, g: Graph) -> None:
    """Raise DecompositionError unless td is a tree decomposition of g."""
    nb = len(td.bags)
    if g.n and nb == 0:
        raise DecompositionError("no bags")
    for b in td.bags:
        if any(not 0 <= v < g.n for v in b):
            raise DecompositionError("bag vertex out of range")
    adj = [[] for _ in range(nb)]
    for a, b in td.edges:
        if not (0 <= a < nb and 0 <= b < nb) or a == b:
            raise DecompositionError(f"bad tree edge {a} {b}")
        adj[a].append(b)
        adj[b].append(a)
    if nb and len(td.edges) != nb - 1:
        raise DecompositionError("decomposition tree must have |bags|-1 edges")
    if nb:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != nb:
            raise DecompositionError("decomposition tree is disconnected")
    for v in range(g.n):
        holders = [i for i, b in enumerate(td.bags) if v in b]
        if not holders:
            raise DecompositionError(f"vertex {v} in no bag")
        hs = set(holders)
        seen = {holders[0]}
        stack = [holders[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in hs and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != hs:
            raise DecompositionError(f"bags of vertex {v} are not connected")
    for u, v in g.edges():
        if not any(u in b and v in b for b in td.bags):
            raise DecompositionError(f"edge {u} {v} not covered")


# ---------------------------------------------------------------- orderings


def _fill_order(g: Graph) -> list[int]:
    adj = [set(a) for a in g.adj]
    alive = set(range(g.n))
    order = []
    while alive:
        best, bestkey = None, None
        for v in sorted(alive):
            nb = list(adj[v])
            fill = sum(1 for i in range(len(nb)) for j in range(i + 1, len(nb))
                       if nb[j] not in adj[nb[i]])
            key = (fill, len(nb), v)
            if bestkey is None or key < bestkey:
                best, bestkey = v, key
        nb = list(adj[best])
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                adj[nb[i]].add(nb[j])
                adj[nb[j]].add(nb[i])
        for x in nb:
            adj[x].discard(best)
        alive.discard(best)
        order.append(best)
    return order


def order_width(g: Graph, order: list[int]) -> int:
    adj = [set(a) for a in g.adj]
    w = -1
    for v in order:
        nb = list(adj[v])
        w = max(w, len(nb))
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                adj[nb[i]].add(nb[j])
                adj[nb[j]].add(nb[i])
        for x in nb:
            adj[x].discard(v)
    return w


def _q_size(nbmask: list[int], s: int, v: int) -> int:
    """|Q(S, v)|: vertices outside S + v reachable from v through S."""
    comp = 1 << v
    frontier = comp
    reach = 0
    while frontier:
        x = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        nb = nbmask[x]
        reach |= nb
        inner = nb & s & ~comp
        comp |= inner
        frontier |= inner
    return bin(reach & ~s & ~comp).count("1")


def _exact_order(g: Graph, ub: int) -> list[int]:
    """Optimal ordering by a subset DP, given an ordering of width ub."""
    n = g.n
    nbmask = [sum(1 << w for w in g.adj[v]) for v in range(n)]
    full = (1 << n) - 1
    # layer-by-layer: best[S] = min over orders of S of the max Q-size so far
    best = {0: -1}
    back = {}
    for _ in range(n):
        nxt = {}
        for s, val in best.items():
            rest = full & ~s
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                q = max(val, _q_size(nbmask, s, v))
                if q > ub:
                    continue
                t = s | (1 << v)
                if t not in nxt or q < nxt[t]:
                    nxt[t] = q
                    back[t] = v
        best = nxt
    order = []
    s = full
    while s:
        v = back[s]
        order.append(v)
        s &= ~(1 << v)
    order.reverse()
    return order


def elimination_order(g: Graph) -> list[int]:
    order = _fill_order(g)
    if g.n <= EXACT_LIMIT:
        order = _exact_order(g, order_width(g, order))
    return order


def from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Decomposition with one bag per vertex: v plus its later filled neighbours."""
    if g.n == 0:
        return TreeDecomposition(0, (frozenset(),), ())
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(a) for a in g.adj]
    bags, parent = [], []
    for v in order:
        later = set(adj[v])
        bags.append(frozenset(later | {v}))
        parent.append(min((pos[x] for x in later), default=None))
        nb = list(later)
        for i in range(len(nb)):
            for j in range(i + 1, len(nb)):
                adj[nb[i]].add(nb[j])
                adj[nb[j]].add(nb[i])
        for x in nb:
            adj[x].discard(v)
    edges = [(i, p) for i, p in enumerate(parent) if p is not None]
    roots = [i for i, p in enumerate(parent) if p is None]
    edges += [(roots[i], roots[i + 1]) for i in range(len(roots) - 1)]
    return TreeDecomposition(g.n, tuple(bags), tuple(edges))


def compute_decomposition(g: Graph) -> TreeDecomposition:
    return from_order(g, elimination_order(g))


def treewidth(g: Graph) -> int:
    return compute_decomposition(g).width


# ---------------------------------------------------------------- PACE format


def parse_td(text) -> TreeDecomposition:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header = None
    bags = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        try:
            nums = [int(x) for x in tok[2:]] if tok[0] in ("s", "b") else [int(x) for x in tok]
        except ValueError:
            raise DecompositionError(f"line {lineno}: expected integers") from None
        if tok[0] == "s":
            if header is not None or len(tok) != 5 or tok[1] != "td":
                raise DecompositionError(f"line {lineno}: bad header")
            header = nums
        elif header is None:
            raise DecompositionError(f"line {lineno}: content before 's td' header")
        elif tok[0] == "b":
            bid = int(tok[1])
            if not 1 <= bid <= header[0] or bid in bags:
                raise DecompositionError(f"line {lineno}: bad bag id {bid}")
            if any(not 1 <= v <= header[2] for v in nums):
                raise DecompositionError(f"line {lineno}: bag vertex out of range")
            bags[bid] = frozenset(v - 1 for v in nums)
        else:
            if len(nums) != 2 or any(not 1 <= x <= header[0] for x in nums):
                raise DecompositionError(f"line {lineno}: bad tree edge")
            edges.append((nums[0] - 1, nums[1] - 1))
    if header is None:
        raise DecompositionError("missing 's td' header")
    nb, w, n = header
    if len(bags) != nb:
        raise DecompositionError(f"header announces {nb} bags, found {len(bags)}")
    out = tuple(bags[i] for i in range(1, nb + 1))
    if max((len(b) for b in out), default=0) != w:
        raise DecompositionError("header width does not match the largest bag")
    return TreeDecomposition(n, out, tuple(edges))


def emit_td(td: TreeDecomposition) -> str:
    w = max((len(b) for b in td.bags), default=0)
    lines = [f"s td {len(td.bags)} {w} {td.n}"]
    for i, b in enumerate(td.bags, 1):
        lines.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(b)]))
    lines += [f"{a + 1} {b + 1}" for a, b in td.edges]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- nice form

LEAF, INTRO, INTRO_EDGE, FORGET, JOIN = "leaf", "intro", "edge", "forget", "join"


class NiceDecomposition:
    """Rooted nice decomposition. Node i has kind[i], bag[i], children[i], arg[i].

    ``arg`` is the vertex for intro/forget nodes and the pair for edge nodes.
    Children always precede parents, so ``range(len(kind))`` is a postorder.
    """

    def __init__(self):
        self.kind = []
        self.bag = []
        self.children = []
        self.arg = []
        self.root = -1

    def add(self, kind, bag, children=(), arg=None) -> int:
        self.kind.append(kind)
        self.bag.append(frozenset(bag))
        self.children.append(tuple(children))
        self.arg.append(arg)
        return len(self.kind) - 1

    def __len__(self) -> int:
        return len(self.kind)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bag) - 1

    @property
    def has_edges(self) -> bool:
        return INTRO_EDGE in self.kind

    def check(self, g: Graph, with_edges: bool) -> None:
        if self.bag[self.root]:
            raise DecompositionError("root bag must be empty")
        seen_edges = set()
        forgotten = set()
        for i, kind in enumerate(self.kind):
            ch = self.children[i]
            b = self.bag[i]
            if kind == LEAF:
                if ch or b:
                    raise DecompositionError("leaf must be childless with empty bag")
            elif kind == INTRO:
                if len(ch) != 1 or self.bag[ch[0]] | {self.arg[i]} != b or self.arg[i] in self.bag[ch[0]]:
                    raise DecompositionError("bad introduce node")
            elif kind == FORGET:
                v = self.arg[i]
                if len(ch) != 1 or b | {v} != self.bag[ch[0]] or v in b:
                    raise DecompositionError("bad forget node")
                if v in forgotten:
                    raise DecompositionError(f"vertex {v} forgotten twice")
                forgotten.add(v)
            elif kind == JOIN:
                if len(ch) != 2 or any(self.bag[c] != b for c in ch):
                    raise DecompositionError("bad join node")
            elif kind == INTRO_EDGE:
                u, v = self.arg[i]
                if len(ch) != 1 or self.bag[ch[0]] != b or u not in b or v not in b:
                    raise DecompositionError("bad edge node")
                if not g.has_edge(u, v) or (u, v) in seen_edges:
                    raise DecompositionError("edge node for a non-edge or repeated edge")
                seen_edges.add((u, v))
        if forgotten != set(range(g.n)):
            raise DecompositionError("every vertex must be forgotten exactly once")
        if with_edges and seen_edges != set(g.edges()):
            raise DecompositionError("every edge must be introduced exactly once")


def make_nice(td: TreeDecomposition, g: Graph, with_edges: bool = False) -> NiceDecomposition:
    validate(td, g)
    nd = NiceDecomposition()
    nb = len(td.bags)
    adj = [[] for _ in range(nb)]
    for a, b in td.edges:
        adj[a].append(b)
        adj[b].append(a)

    def forget(node: int, v: int) -> int:
        bag = nd.bag[node]
        if with_edges:
            for w in sorted(bag):
                if w != v and g.has_edge(v, w):
                    node = nd.add(INTRO_EDGE, bag, (node,), (min(v, w), max(v, w)))
        return nd.add(FORGET, bag - {v}, (node,), v)

    def morph(node: int, target: frozenset) -> int:
        for v in sorted(nd.bag[node] - target):
            node = forget(node, v)
        for v in sorted(target - nd.bag[node]):
            node = nd.add(INTRO, nd.bag[node] | {v}, (node,), v)
        return node

    # iterative postorder over the decomposition tree rooted at bag 0
    parent = [-1] * nb
    order = [0]
    seen = {0}
    for x in order:
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = x
                order.append(y)
    kids = [[] for _ in range(nb)]
    for y in order[1:]:
        kids[parent[y]].append(y)
    built = {}
    for x in reversed(order):
        target = td.bags[x]
        subs = [morph(built[c], target) for c in kids[x]]
        if not subs:
            subs = [morph(nd.add(LEAF, ()), target)]
        node = subs[0]
        for other in subs[1:]:
            node = nd.add(JOIN, target, (node, other))
        built[x] = node
    nd.root = morph(built[0], frozenset())
    return nd


def nice_decomposition(g: Graph, with_edges: bool = False, td: TreeDecomposition | None = None):
    return make_nice(td if td is not None else compute_decomposition(g), g, with_edges)
