"""Hardness constructions as instance generators.

Gadgets (triangle cycles, selector and literal gadgets for triangles and for
4-cycles, diamonds of H) and the compilers from CNF formulas: smallest
unsatisfiable subformula to Triangle-HitPack, its triangle-partition
extension, Triangle-HitPack to H-HitPack, and the two 3-SAT constructions of
logarithmic pathwidth that also emit their path decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import factorial

from hitpack.graph_core import Clique, Cycle, Graph, Instance, ParseError, Subgraph, cycle_graph, is_connected
from hitpack.packing_oracle import _cliques
from hitpack.treewidth import TreeDecomposition

# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Cnf:
    num_vars: int
    clauses: tuple  # tuple of tuples of nonzero ints, DIMACS style

    def __post_init__(self):
        cl = tuple(tuple(c) for c in self.clauses)
        object.__setattr__(self, "clauses", cl)
        for c in cl:
            if not c:
                raise ValueError("empty clause")
            if any(x == 0 or abs(x) > self.num_vars for x in c):
                raise ValueError(f"literal out of range in clause {c}")

    @property
    def m(self) -> int:
        return len(self.clauses)


def satisfiable(cnf: Cnf, clause_ids=None) -> bool:
    """Brute force over all assignments (small formulas only)."""
    ids = range(cnf.m) if clause_ids is None else clause_ids
    cls = [cnf.clauses[j] for j in ids]
    for bits in range(1 << cnf.num_vars):
        if all(any((bits >> (abs(x) - 1) & 1) == (x > 0) for x in c) for c in cls):
            return True
    return False


def brute_sus(cnf: Cnf, k: int) -> bool:
    """Is there an unsatisfiable subformula with at most k clauses?"""
    for s in range(min(k, cnf.m) + 1):
        for sub in combinations(range(cnf.m), s):
            if not satisfiable(cnf, sub):
                return True
    return False


def parse_dimacs(text) -> Cnf:
    if isinstance(text, bytes):
        text = text.decode()
    header = None
    clauses, cur = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("non-integer in header", lineno) from None
            continue
        if header is None:
            raise ParseError("clause before header", lineno)
        for tok in line.split():
            try:
                x = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if x == 0:
                if not cur:
                    raise ParseError("empty clause", lineno)
                clauses.append(tuple(cur))
                cur = []
            elif abs(x) > header[0]:
                raise ParseError(f"literal {x} exceeds {header[0]} variables", lineno)
            else:
                cur.append(x)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if cur:
        clauses.append(tuple(cur))
    if len(clauses) != header[1]:
        raise ParseError(f"header says {header[1]} clauses, found {len(clauses)}")
    return Cnf(header[0], tuple(clauses))


def emit_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.num_vars} {cnf.m}"]
    lines += [" ".join(map(str, c)) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- building blocks


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges = set()

    def new(self, count: int = 1) -> list[int]:
        out = list(range(self.n, self.n + count))
        self.n += count
        return out

    def edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("self-loop in construction")
        self.edges.add((min(u, v), max(u, v)))

    def cycle(self, *vs) -> None:
        for i, v in enumerate(vs):
            self.edge(v, vs[(i + 1) % len(vs)])

    def embed(self, gad: "GadgetGraph", fixed: dict | None = None) -> list[int]:
        """Copy a gadget in, with some of its vertices mapped onto existing ones."""
        fixed = fixed or {}
        mp = [fixed[x] if x in fixed else None for x in range(gad.graph.n)]
        for x in range(gad.graph.n):
            if mp[x] is None:
                mp[x] = self.new()[0]
        for u, v in gad.graph.edges():
            self.edge(mp[u], mp[v])
        return mp

    def graph(self) -> Graph:
        return Graph(self.n, sorted(self.edges))


@dataclass(frozen=True)
class GadgetGraph:
    graph: Graph
    names: dict = field(default_factory=dict)  # name -> list of vertices


def _merge(gad: GadgetGraph, keep: int, drop: int) -> GadgetGraph:
    """Identify vertex ``drop`` with ``keep`` and close the gap in the numbering."""
    def re(x):
        x = keep if x == drop else x
        return x - 1 if x > drop else x

    edges = {(min(re(u), re(v)), max(re(u), re(v))) for u, v in gad.graph.edges()}
    names = {k: [re(x) for x in vs] for k, vs in gad.names.items()}
    return GadgetGraph(Graph(gad.graph.n - 1, sorted(edges)), names)


def tricyc(r: int) -> GadgetGraph:
    """2r triangles in a ring: v_i on u_{2i-2}u_{2i-1}, vbar_i on u_{2i-1}u_{2i}."""
    if r < 2:
        raise ValueError("TriCyc needs r >= 2")
    b = _Builder()
    u = b.new(2 * r)
    v = b.new(r)
    vb = b.new(r)
    b.cycle(*u)
    for i in range(r):
        b.edge(v[i], u[2 * i])
        b.edge(v[i], u[2 * i + 1])
        b.edge(vb[i], u[2 * i + 1])
        b.edge(vb[i], u[(2 * i + 2) % (2 * r)])
    return GadgetGraph(b.graph(), {"u": u, "v": v, "vbar": vb})


def sel(r: int) -> GadgetGraph:
    """TriCyc(3r) keeping v_i = v'_{3i} and vbar_i = vbar'_{3i-2}."""
    if r < 2:
        raise ValueError("Sel needs r >= 2")
    t = tricyc(3 * r)
    v = [t.names["v"][3 * i + 2] for i in range(r)]
    vb = [t.names["vbar"][3 * i] for i in range(r)]
    return GadgetGraph(t.graph, {"u": t.names["u"], "v": v, "vbar": vb})


def lit(r: int) -> GadgetGraph:
    """Sel(r) with vbar_1 and vbar_3 identified."""
    if r < 4:
        raise ValueError("Lit needs r >= 4")
    s = sel(r)
    vb = s.names["vbar"]
    out = _merge(s, vb[0], vb[2])
    return GadgetGraph(out.graph, {"v": out.names["v"], "vbar": out.names["vbar"]})


def _c4_chain(count: int, ring: bool):
    b = _Builder()
    a = b.new(count)
    bs = b.new(count)
    c = b.new(count)
    d = [bs[(i + 1) % count] for i in range(count)] if ring else bs[1:] + b.new(1)
    for i in range(count):
        b.cycle(a[i], bs[i], c[i], d[i])
    return b, a, bs, c, d


def clit(r: int) -> GadgetGraph:
    """6r four-cycles a_i b_i c_i d_i in a ring with d_i = b_{i+1}."""
    if r < 2:
        raise ValueError("CLit needs r >= 2")
    b, a, bs, c, d = _c4_chain(6 * r, ring=True)
    v = [a[6 * i] for i in range(r)]  # a_{6i-5}
    vb = [a[6 * i + 3] for i in range(r)]  # a_{6i-2}
    return GadgetGraph(b.graph(), {"a": a, "b": bs, "c": c, "v": v, "vbar": vb})


def csel() -> GadgetGraph:
    """Chain of five four-cycles with d_i = b_{i+1}."""
    b, a, bs, c, d = _c4_chain(5, ring=False)
    return GadgetGraph(b.graph(), {"a": a, "b": bs, "c": c, "d": [d[-1]]})


def _bfs_dist(h: Graph, s: int) -> list[int]:
    dist = [-1] * h.n
    dist[s] = 0
    queue = [s]
    for x in queue:
        for y in h.adj[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def diamond_ends(h: Graph) -> tuple[int, int]:
    """(u, u'): u is the lowest vertex attaining the diameter, u' its lowest partner."""
    best = None
    for s in range(h.n):
        dist = _bfs_dist(h, s)
        far = max(dist)
        if best is None or far > best[0]:
            best = (far, s, dist.index(far))
    return best[1], best[2]


def diamond(h: Graph) -> GadgetGraph:
    """H plus a twin ubar of u (same neighbours)."""
    if h.n < 2 or not is_connected(h):
        raise ValueError("diamond needs a connected H with at least 2 vertices")
    u, up = diamond_ends(h)
    ub = h.n
    edges = list(h.edges()) + [(w, ub) for w in h.adj[u]]
    return GadgetGraph(Graph(h.n + 1, edges), {"u": [u], "ubar": [ub], "uprime": [up]})


def gen_gadget(kind: str, r: int | None = None, h: Graph | None = None) -> GadgetGraph:
    kind = kind.lower()
    if kind == "tricyc":
        return tricyc(r)
    if kind == "sel":
        return sel(r)
    if kind == "lit":
        return lit(r)
    if kind == "clit":
        return clit(r)
    if kind == "csel":
        return csel()
    if kind == "diamond":
        if h is None:
            raise ValueError("diamond needs H")
        return diamond(h)
    raise ValueError(f"unknown gadget {kind!r}")


# ---------------------------------------------------------------- SUS to triangles


def sus_to_triangle(cnf: Cnf, k: int) -> Instance:
    """Triangle-HitPack instance that is YES iff cnf has an unsatisfiable subformula of <= k clauses.

    Vertex layout: variable i (0-based) owns the block 4mi.. of v, vbar, w, wbar
    (m each); clause j owns a_j, b_j, c_j at 4mn + 3j. Only the c_j are deletable.
    """
    m, n = cnf.m, cnf.num_vars
    if m < 1:
        raise ValueError("need at least one clause")
    b = _Builder()
    blocks = []
    for _ in range(n):
        v, vb, w, wb = b.new(m), b.new(m), b.new(m), b.new(m)
        blocks.append((v, vb))
        for j in range(m):
            b.cycle(w[j], v[j], wb[j])
            # for m = 1 the two triangles share the edge w-wbar
            b.cycle(wb[j], vb[j], w[(j + 1) % m])
    cs = []
    for j, clause in enumerate(cnf.clauses):
        a, bb, c = b.new(3)
        b.cycle(a, bb, c)
        cs.append(c)
        for x in clause:
            v, vb = blocks[abs(x) - 1]
            t = v[j] if x > 0 else vb[j]
            b.edge(a, t)
            b.edge(bb, t)
    g = b.graph()
    und = frozenset(range(g.n)) - set(cs)
    return Instance(g, und, k, m * n + m, Clique(3))


def _sus_shape(inst: Instance) -> tuple[int, int]:
    m = len(inst.deletable)
    if m == 0 or (inst.graph.n - 3 * m) % (4 * m):
        raise ValueError("instance does not come from sus_to_triangle")
    return m, (inst.graph.n - 3 * m) // (4 * m)


def extend_to_partition(inst: Instance, k: int, cycles: bool = False) -> Instance:
    """Add mn - k pairs {y, z}, each forming a triangle with every literal vertex.

    After deleting exactly k clause vertices the graph has 3l' vertices, so a
    packing of l' = 2mn + m - k triangles (or cycles) is a triangle partition.
    """
    m, n = _sus_shape(inst)
    if k > m * n:
        raise ValueError("k exceeds mn")
    lits = [base + x for i in range(n) for base in (4 * m * i,) for x in range(2 * m)]
    g = inst.graph
    edges = list(g.edges())
    nn = g.n
    for _ in range(m * n - k):
        y, z = nn, nn + 1
        nn += 2
        edges.append((y, z))
        for v in lits:
            edges += [(v, y), (v, z)]
    g2 = Graph(nn, edges)
    und = inst.undeletable | frozenset(range(g.n, nn))
    fam = Cycle() if cycles else Clique(3)
    return Instance(g2, und, k, inst.ell + m * n - k, fam)


# ---------------------------------------------------------------- triangles to H


@dataclass(frozen=True)
class ChainLayout:
    """Where every diamond and every H_T landed, for building witness packings."""

    h: Graph
    diamonds: tuple  # per triangle: three chains, each a tuple of (copy map, ubar)
    heads: tuple  # per triangle: the copy map of H_T

    def forward_packing(self) -> list[tuple]:
        out = []
        for chains, head in zip(self.diamonds, self.heads):
            for chain in chains:
                out += [tuple(mp) for mp, _ in chain]
            out.append(tuple(head))
        return out


def triangle_to_h(inst: Instance, h: Graph, chain_len: int | None = None, layout: bool = False):
    """H-HitPack instance built from a Triangle-HitPack instance.

    Every triangle T = xyz gets three chains of diamonds starting at x, y, z
    and ending in a fresh copy H_T (at its vertices 0, 1, 2); the original edges
    are deleted and every new vertex is undeletable.
    """
    if inst.family != Clique(3):
        raise ValueError("triangle_to_h needs a Clique(3) instance")
    if h.n < 3 or not is_connected(h):
        raise ValueError("H must be connected with at least 3 vertices")
    nh = h.n
    length = 10 * nh if chain_len is None else chain_len
    if length < 1:
        raise ValueError("chain length must be positive")
    g = inst.graph
    tris = _cliques(g, 3)
    dia = diamond(h)
    u = dia.names["u"][0]
    ub = dia.names["ubar"][0]
    b = _Builder()
    b.new(g.n)
    all_chains, heads = [], []
    for tri in tris:
        head = b.new(nh)
        for x, y in h.edges():
            b.edge(head[x], head[y])
        chains = []
        for pos, v in enumerate(tri):
            cur = v
            chain = []
            for i in range(length):
                fixed = {u: cur}
                if i == length - 1:
                    fixed[ub] = head[pos]
                mp = b.embed(dia, fixed)
                chain.append((tuple(mp[:nh]), mp[ub]))
                cur = mp[ub]
            chains.append(tuple(chain))
        all_chains.append(tuple(chains))
        heads.append(tuple(head))
    g2 = b.graph()
    und = inst.undeletable | frozenset(range(g.n, g2.n))
    out = Instance(g2, und, inst.k, 3 * length * len(tris) + inst.ell, Subgraph(h))
    if layout:
        return out, ChainLayout(h, tuple(all_chains), tuple(heads))
    return out


# ---------------------------------------------------------------- 3-SAT preprocessing


@dataclass(frozen=True)
class Preprocessed:
    cnf: Cnf | None
    decided: bool | None  # satisfiability when propagation already settles it


def _propagate(clauses: list, assign: dict):
    clauses = [tuple(dict.fromkeys(c)) for c in clauses]
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            return clauses, None
        assign[abs(unit)] = unit > 0
        nxt = []
        for c in clauses:
            if unit in c:
                continue
            c = tuple(x for x in c if x != -unit)
            if not c:
                return [], False
            nxt.append(c)
        clauses = nxt
        if not clauses:
            return [], True


def preprocess_3sat(cnf: Cnf, mode: str = "triangle") -> Preprocessed:
    """Equisatisfiable 3-CNF in the shape the lower-bound generators expect.

    Unit clauses are propagated, 2-clauses split with a fresh variable, four
    clauses (x_i or not x_i or +-x_{i+1}, +-x_{i+2}) added per variable, and
    clauses duplicated cyclically up to 2^c with c >= 4 (triangle mode) or up
    to t! for the least t (c4 mode).
    """
    if mode not in ("triangle", "c4"):
        raise ValueError("mode must be 'triangle' or 'c4'")
    for c in cnf.clauses:
        if len(set(c)) > 3:
            raise ValueError("clauses may have at most three literals")
    clauses, decided = _propagate(list(cnf.clauses), {})
    if decided is not None:
        return Preprocessed(None, decided)
    used = sorted({abs(x) for c in clauses for x in c})
    ren = {v: i + 1 for i, v in enumerate(used)}
    clauses = [tuple((1 if x > 0 else -1) * ren[abs(x)] for x in c) for c in clauses]
    nv = len(used)
    out = []
    for c in clauses:
        if len(c) == 2:
            nv += 1
            out += [c + (nv,), c + (-nv,)]
        else:
            out.append(c)
    # the wrap-around clauses need x_i, x_{i+1}, x_{i+2} pairwise distinct
    nv = max(nv, 3)
    for i in range(1, nv + 1):
        j1 = i % nv + 1
        j2 = (i + 1) % nv + 1
        out += [(i, -i, j1), (i, -i, -j1), (i, -i, j2), (i, -i, -j2)]
    base = len(out)
    if mode == "triangle":
        target = 16
        while target < base:
            target *= 2
    else:
        t = 1
        while factorial(t) < base:
            t += 1
        target = factorial(t)
    out += [out[i % base] for i in range(target - base)]
    return Preprocessed(Cnf(nv, tuple(out)), None)


# ---------------------------------------------------------------- lower-bound instances


def _path_td(n: int, bags: list) -> TreeDecomposition:
    return TreeDecomposition(n, tuple(frozenset(b) for b in bags),
                             tuple((i, i + 1) for i in range(len(bags) - 1)))


def _occurrences(cnf: Cnf) -> list[tuple[int, int, int]]:
    """(literal, clause index j, position p) sorted by literal so shared vertices stay contiguous."""
    occ = [(x, j, p) for j, c in enumerate(cnf.clauses) for p, x in enumerate(c)]
    return sorted(occ, key=lambda o: (abs(o[0]), o[0] < 0, o[1], o[2]))


def _check_3cnf(cnf: Cnf) -> None:
    if any(len(c) != 3 for c in cnf.clauses):
        raise ValueError("every clause needs exactly three literals")


def threesat_to_triangle_pw(cnf: Cnf):
    """(Instance, path decomposition) with Z of 6c vertices and one bag per gadget.

    Bit gamma of clause j is bit gamma-1 (least significant first) of j - 1
    (1-based j). Literal gadgets are ordered by literal so that every d_lambda
    occupies consecutive bags.
    """
    _check_3cnf(cnf)
    m = cnf.m
    c = m.bit_length() - 1
    if m != 1 << c or c < 4:
        raise ValueError("need exactly 2^c clauses with c >= 4")
    b = _Builder()
    z = {(gm, p, bit): b.new()[0] for gm in range(c) for p in range(3) for bit in range(2)}
    zs = sorted(z.values())
    bags = []
    s3 = sel(3)
    for gm in range(c):
        fixed = {s3.names["v"][p]: z[(gm, p, 0)] for p in range(3)}
        fixed.update({s3.names["vbar"][p]: z[(gm, p, 1)] for p in range(3)})
        mp = b.embed(s3, fixed)
        bags.append(set(zs) | set(mp))
    d = {}
    for x in sorted({x for cl in cnf.clauses for x in cl}, key=lambda x: (abs(x), x < 0)):
        d[x] = b.new()[0]
    lg = lit(c + 1)
    for x, j, p in _occurrences(cnf):
        fixed = {lg.names["v"][gm]: z[(gm, p, 1 - (j >> gm & 1))] for gm in range(c)}
        fixed[lg.names["v"][c]] = d[x]
        mp = b.embed(lg, fixed)
        bags.append(set(zs) | set(mp))
    g = b.graph()
    und = frozenset(range(g.n)) - set(d.values())
    inst = Instance(g, und, cnf.num_vars, 3 * m * (3 * c + 2) + 9 * c + 3, Clique(3))
    return inst, _path_td(g.n, bags)


def threesat_to_c4_pw(cnf: Cnf):
    """(Instance, path decomposition) for C4-HitPack with Z of 6t vertices, m = t!.

    The permutations sigma_1..sigma_m are those of [t] in lexicographic order.
    """
    _check_3cnf(cnf)
    m = cnf.m
    t = 1
    while factorial(t) < m:
        t += 1
    if factorial(t) != m:
        raise ValueError("need exactly t! clauses")
    sig = list(permutations(range(t)))
    assert len(set(sig)) == m
    b = _Builder()
    z = {(gm, p, g): b.new()[0] for gm in range(t) for p in range(3) for g in range(2)}
    zs = sorted(z.values())
    bags = []
    cs = csel()
    for i in range(t):
        for j in range(t):
            mp = b.embed(cs)
            for p in range(3):
                a = mp[cs.names["a"][2 * p]]
                b.edge(a, z[(i, p, 0)])
                b.edge(a, z[(j, p, 1)])
            bags.append(set(zs) | set(mp))
    dt = {i: b.new()[0] for i in range(1, cnf.num_vars + 1)}
    df = {i: b.new()[0] for i in range(1, cnf.num_vars + 1)}
    cl = clit(t + 1)
    for x, j, p in _occurrences(cnf):
        i = abs(x)
        on, off = (dt[i], df[i]) if x > 0 else (df[i], dt[i])
        fixed = {cl.names["v"][t]: on, cl.names["vbar"][t]: off}
        mp = b.embed(cl, fixed)
        for gm in range(t):
            vb = mp[cl.names["vbar"][gm]]
            b.edge(vb, z[(gm, p, 0)])
            b.edge(vb, z[(sig[j][gm], p, 1)])
        bags.append(set(zs) | set(mp))
    g = b.graph()
    dels = set(dt.values()) | set(df.values())
    und = frozenset(range(g.n)) - dels
    ell = 3 * t * t + 9 * m * (t + 1) + 2 * t
    return Instance(g, und, cnf.num_vars, ell, Subgraph(cycle_graph(4))), _path_td(g.n, bags)
