import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import strategies as st

from hitpack.graph_core import Graph


def random_graph(rng: random.Random, n: int, p: float | None = None) -> Graph:
    if p is None:
        p = rng.random()
    return Graph(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def random_subset(rng: random.Random, n: int, p: float = 0.3) -> frozenset:
    return frozenset(v for v in range(n) if rng.random() < p)


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def atlas_graphs(max_n: int) -> list[Graph]:
    """One graph per isomorphism class on 1..max_n vertices (max_n <= 7)."""
    out = []
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() <= max_n:
            out.append(Graph(h.number_of_nodes(), list(h.edges())))
    return out


def petersen() -> Graph:
    return Graph(10, list(nx.petersen_graph().edges()))


@st.composite
def graphs(draw, min_n=0, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, b in zip(pairs, mask) if b])


@pytest.fixture
def rng():
    return random.Random(20240611)


# criterion number -> (passed, summary), filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {text}")
