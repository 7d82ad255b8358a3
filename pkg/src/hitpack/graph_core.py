"""Graph and instance data model shared by every solver.

Vertices are the integers ``0..n-1``. Graphs are immutable: every operation
that changes the vertex or edge set returns a new graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class ParseError(ValueError):
    """Malformed instance text. ``line`` is 1-based, or None for global errors."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class Graph:
    """Undirected simple graph with sorted adjacency tuples."""

    __slots__ = ("n", "adj", "_adjset", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        nbrs = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if v not in nbrs[u]:
                nbrs[u].add(v)
                nbrs[v].add(u)
                m += 1
        self.n = n
        self._adjset = tuple(frozenset(s) for s in nbrs)
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        self._m = m

    def neighbors(self, v: int) -> frozenset:
        return self._adjset[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjset[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def m(self) -> int:
        return self._m

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def vertices(self) -> range:
        return range(self.n)

    def induced(self, vs: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on ``vs`` (re-indexed in increasing order) and old->new map."""
        keep = sorted(set(vs))
        idx = {v: i for i, v in enumerate(keep)}
        es = [(idx[u], idx[v]) for u in keep for v in self.adj[u] if v in idx and u < v]
        return Graph(len(keep), es), idx

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def is_connected(g: Graph) -> bool:
    return len(components(g)) <= 1


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def delete_vertices(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """G - S with survivors re-indexed in order; returns the old->new id map."""
    s = set(s)
    for v in s:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    return g.induced(v for v in range(g.n) if v not in s)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def disjoint_union(*gs: Graph) -> Graph:
    es, off = [], 0
    for g in gs:
        es += [(u + off, v + off) for u, v in g.edges()]
        off += g.n
    return Graph(off, es)


# ---------------------------------------------------------------- families


@dataclass(frozen=True)
class Edge:
    name = "edge"


@dataclass(frozen=True)
class Clique:
    q: int
    name = "clique"

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("clique size q must be at least 2")


@dataclass(frozen=True)
class Subgraph:
    h: Graph
    name = "subgraph"

    def __post_init__(self):
        if self.h.n < 1:
            raise ValueError("H needs at least one vertex")
        if not is_connected(self.h):
            raise ValueError("H must be connected")


@dataclass(frozen=True)
class Cycle:
    name = "cycle"


Family = Edge | Clique | Subgraph | Cycle


def clique_size(family: Family) -> int | None:
    """q for Edge/Clique families (Edge is Clique(2)), else None."""
    if isinstance(family, Edge):
        return 2
    if isinstance(family, Clique):
        return family.q
    return None


def as_pattern(family: Family) -> Graph | None:
    """The fixed pattern graph of a non-cycle family."""
    if isinstance(family, Subgraph):
        return family.h
    q = clique_size(family)
    return complete_graph(q) if q is not None else None


# ---------------------------------------------------------------- instances


@dataclass(frozen=True)
class Instance:
    graph: Graph
    undeletable: frozenset
    k: int
    ell: int
    family: Family

    def __post_init__(self):
        object.__setattr__(self, "undeletable", frozenset(self.undeletable))
        if any(not 0 <= v < self.graph.n for v in self.undeletable):
            raise ValueError("undeletable vertex out of range")
        if self.k < 0 or self.ell < 0:
            raise ValueError("k and l must be nonnegative")

    @property
    def deletable(self) -> list[int]:
        return [v for v in range(self.graph.n) if v not in self.undeletable]

    def replace(self, **kw) -> "Instance":
        d = dict(graph=self.graph, undeletable=self.undeletable, k=self.k,
                 ell=self.ell, family=self.family)
        d.update(kw)
        return Instance(**d)


@dataclass(frozen=True)
class Verdict:
    answer: bool
    witness: frozenset | None = field(default=None)

    def __str__(self) -> str:
        return "YES" if self.answer else "NO"


def _ints(parts, lineno, count):
    if len(parts) != count:
        raise ParseError(f"expected {count} integer(s), got {len(parts)}", lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError("expected integers", lineno) from None


def parse_instance(text) -> Instance:
    """Parse the line-based instance format (see README)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = None
    edges, seen = [], set()
    und = []
    k = ell = None
    fam = None
    hn = None
    hedges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        key, rest = tok[0], tok[1:]
        if n is None and key != "n":
            raise ParseError("first directive must be 'n'", lineno)
        if key == "n":
            if n is not None:
                raise ParseError("repeated 'n'", lineno)
            (n,) = _ints(rest, lineno, 1)
            if n < 0:
                raise ParseError("negative vertex count", lineno)
        elif key == "e":
            u, v = _ints(rest, lineno, 2)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex out of range in edge {u} {v}", lineno)
            if u == v:
                raise ParseError(f"self-loop at {u}", lineno)
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ParseError(f"duplicate edge {u} {v}", lineno)
            seen.add(e)
            edges.append(e)
        elif key == "u":
            (v,) = _ints(rest, lineno, 1)
            if not 0 <= v < n:
                raise ParseError(f"undeletable vertex {v} out of range", lineno)
            und.append(v)
        elif key == "k":
            (k,) = _ints(rest, lineno, 1)
            if k < 0:
                raise ParseError("negative k", lineno)
        elif key == "l":
            (ell,) = _ints(rest, lineno, 1)
            if ell < 0:
                raise ParseError("negative l", lineno)
        elif key == "family":
            if not rest:
                raise ParseError("missing family name", lineno)
            name = rest[0]
            if name == "edge" and len(rest) == 1:
                fam = ("edge",)
            elif name == "cycle" and len(rest) == 1:
                fam = ("cycle",)
            elif name == "subgraph" and len(rest) == 1:
                fam = ("subgraph",)
            elif name == "clique":
                (q,) = _ints(rest[1:], lineno, 1)
                if q < 2:
                    raise ParseError("clique size must be at least 2", lineno)
                fam = ("clique", q)
            else:
                raise ParseError(f"unknown family {' '.join(rest)!r}", lineno)
        elif key == "h":
            if not rest or rest[0] not in ("n", "e"):
                raise ParseError("expected 'h n <int>' or 'h e <u> <v>'", lineno)
            if rest[0] == "n":
                (hn,) = _ints(rest[1:], lineno, 1)
                if hn < 1:
                    raise ParseError("H needs at least one vertex", lineno)
            else:
                if hn is None:
                    raise ParseError("'h e' before 'h n'", lineno)
                a, b = _ints(rest[1:], lineno, 2)
                if not (0 <= a < hn and 0 <= b < hn) or a == b:
                    raise ParseError(f"bad H edge {a} {b}", lineno)
                hedges.append((a, b))
        else:
            raise ParseError(f"unknown directive {key!r}", lineno)
    if n is None:
        raise ParseError("missing 'n'")
    if k is None:
        raise ParseError("missing 'k'")
    if ell is None:
        raise ParseError("missing 'l'")
    if fam is None:
        raise ParseError("missing 'family'")
    if fam[0] == "edge":
        family = Edge()
    elif fam[0] == "cycle":
        family = Cycle()
    elif fam[0] == "clique":
        family = Clique(fam[1])
    else:
        if hn is None:
            raise ParseError("subgraph family needs 'h n'")
        h = Graph(hn, hedges)
        if not is_connected(h):
            raise ParseError("H is disconnected")
        family = Subgraph(h)
    if hn is not None and fam[0] != "subgraph":
        raise ParseError("'h' lines only allowed with family subgraph")
    return Instance(Graph(n, edges), frozenset(und), k, ell, family)


def emit_instance(inst: Instance) -> str:
    g = inst.graph
    lines = [f"n {g.n}"]
    lines += [f"e {u} {v}" for u, v in g.edges()]
    lines += [f"u {v}" for v in sorted(inst.undeletable)]
    lines += [f"k {inst.k}", f"l {inst.ell}"]
    f = inst.family
    if isinstance(f, Edge):
        lines.append("family edge")
    elif isinstance(f, Cycle):
        lines.append("family cycle")
    elif isinstance(f, Clique):
        lines.append(f"family clique {f.q}")
    else:
        lines.append("family subgraph")
        lines.append(f"h n {f.h.n}")
        lines += [f"h e {a} {b}" for a, b in f.h.edges()]
    return "\n".join(lines) + "\n"
