"""Matching functions f(S) = ν(G - S), the randomized Tutte-matrix test and the G* lift."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from hitpack.graph_core import Graph, delete_vertices
from hitpack.matching import matching_number

PRIME = (1 << 61) - 1  # Mersenne prime, far above 2n^2 for any graph we handle


@dataclass(frozen=True)
class MatchFunction:
    k: int
    table: tuple  # table[mask] = ν(G - S), bit i of mask is vertex i

    def __call__(self, s=()) -> int:
        return self.table[sum(1 << x for x in s)]

    def check(self) -> None:
        """Deleting a vertex lowers ν by at most one and never raises it."""
        full = self.table[0]
        for mask, val in enumerate(self.table):
            assert 0 <= full - val <= bin(mask).count("1")
            for i in range(self.k):
                if not mask >> i & 1:
                    assert 0 <= val - self.table[mask | 1 << i] <= 1


def match_function(g: Graph, k: int) -> MatchFunction:
    if not 0 <= k <= g.n:
        raise ValueError("need 0 <= k <= n")
    table = []
    for mask in range(1 << k):
        h, _ = delete_vertices(g, [i for i in range(k) if mask >> i & 1])
        table.append(matching_number(h))
    return MatchFunction(k, tuple(table))


def count_distinct_match_functions(family, k: int) -> int:
    return len({match_function(g, k).table for g in family})


# ---------------------------------------------------------------- Tutte matrix


def _det_mod(a: list, p: int) -> int:
    """Determinant over GF(p) by Gaussian elimination."""
    a = [row[:] for row in a]
    n = len(a)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], p - 2, p)
        for r in range(col + 1, n):
            f = a[r][col] * inv % p
            if f:
                row, prow = a[r], a[col]
                for c in range(col, n):
                    row[c] = (row[c] - f * prow[c]) % p
    return det % p


def tutte_matrix(g: Graph, rng: random.Random, p: int = PRIME) -> list:
    a = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges():
        x = rng.randrange(1, p)
        a[u][v] = x
        a[v][u] = (-x) % p
    assert all(a[i][j] == (-a[j][i]) % p for i in range(g.n) for j in range(g.n))
    return a


def has_pm_algebraic(g: Graph, trials: int = 3, seed=0, p: int = PRIME) -> bool:
    """Perfect matching test by random evaluation of the Tutte determinant.

    Never wrong when it answers True; a False answer is wrong with probability
    at most (n / p) ** trials.
    """
    if g.n % 2:
        return False
    if g.n == 0:
        return True
    rng = random.Random(seed)
    return any(_det_mod(tutte_matrix(g, rng, p), p) for _ in range(trials))


# ---------------------------------------------------------------- G* lift


@dataclass(frozen=True)
class Lift:
    graph: Graph
    k0: int
    index: tuple  # index[v] = position of original vertex v in G*
    new: tuple  # positions of the added vertices, the first t of them at k..k+t-1


def gstar_lift(g: Graph, k: int) -> Lift:
    """Add n - 2d + 2k independent vertices adjacent to every original vertex.

    Vertices 0..k-1 keep their ids, t = min(3k, n - 2d + 2k) of the new
    vertices come next, then the remaining original vertices and new ones.
    """
    if not 0 <= k <= g.n:
        raise ValueError("need 0 <= k <= n")
    d = matching_number(g)
    extra = g.n - 2 * d + 2 * k
    t = min(3 * k, extra)
    index = list(range(k)) + [k + t + i for i in range(g.n - k)]
    new = list(range(k, k + t)) + [g.n + t + i for i in range(extra - t)]
    edges = [(index[u], index[v]) for u, v in g.edges()]
    edges += [(x, index[v]) for x in new for v in range(g.n)]
    return Lift(Graph(g.n + extra, edges), k + t, tuple(index), tuple(new))


def lift_query(g: Graph, k: int, s, x: int) -> tuple[bool, bool]:
    """Both sides of the lift statement for S ⊆ [k] and slack x.

    Left: G - S has a matching leaving at most n - |S| - 2d + x vertices
    uncovered. Right: G* - S* has a perfect matching, where S* adds the first
    c = 2k + |S| - x new vertices to S.
    """
    lift = gstar_lift(g, k)
    d = matching_number(g)
    s = list(s)
    h, _ = delete_vertices(g, s)
    left = g.n - len(s) - 2 * matching_number(h) <= g.n - len(s) - 2 * d + x
    c = 2 * k + len(s) - x
    if c < 0:
        raise ValueError("slack x exceeds 2k + |S|")
    if c > len(lift.new):
        # S* would need more new vertices than exist
        return left, False
    star = [lift.index[v] for v in s] + list(lift.new[:c])
    hs, _ = delete_vertices(lift.graph, star)
    right = 2 * matching_number(hs) == hs.n
    return left, right


def match_function_from_lift(g: Graph, k: int) -> MatchFunction:
    """Recover f(S) using only perfect-matching queries on G* - S*.

    ν(G - S) = d - j for the least j >= 0 with G* - S* perfectly matchable
    at slack x = 2j.
    """
    lift = gstar_lift(g, k)
    d = matching_number(g)
    table = []
    for mask in range(1 << k):
        s = [i for i in range(k) if mask >> i & 1]
        for j in range(0, min(len(s), d) + 1):
            c = 2 * k + len(s) - 2 * j
            if c > len(lift.new):
                continue
            hs, _ = delete_vertices(lift.graph, s + list(lift.new[:c]))
            if 2 * matching_number(hs) == hs.n:
                table.append(d - j)
                break
        else:
            raise AssertionError("lift failed to determine f(S)")
    return MatchFunction(k, tuple(table))


def all_graphs(n: int):
    """Every labeled graph on n vertices."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [e for i, e in enumerate(pairs) if mask >> i & 1])
