import pytest
from hypothesis import given, settings, strategies as st

from conftest import atlas_graphs, random_graph, random_subset
from hitpack.cycle_fvs import solve_cycle_fvs
from hitpack.dp_cycle import (EMPTY, LOW, _edge_moves, combine_cycle_types, cycle_classes,
                              reduce_matching, solve_cycle_dp, type_sets)
from hitpack.graph_core import (Cycle, Edge, Graph, Instance, complete_graph, cycle_graph,
                                disjoint_union, path_graph)
from hitpack.packing_oracle import brute_hitpack
from hitpack.treewidth import compute_decomposition, make_nice, nice_decomposition

A, B, C, D = 0, 1, 2, 3


def solve(inst):
    g = inst.graph
    return solve_cycle_dp(inst, make_nice(compute_decomposition(g), g, with_edges=True))


def test_reduce_examples():
    assert reduce_matching([(A, B), (B, C)], 0) == (((A, C),), 0)
    # the three pairs form one closed cycle a-b-c-a, nothing is left open
    assert reduce_matching([(A, B), (B, C), (C, A)], 0) == ((), 1)
    assert reduce_matching([(A, B), (C, D)], 5) == (((A, B), (C, D)), 5)
    assert reduce_matching([(A, B), (A, B)], 0) == ((), 1)
    assert reduce_matching([], 2) == ((), 2)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)).filter(lambda p: p[0] != p[1]),
                max_size=8))
def test_reduce_leaves_a_matching(pairs):
    m, lam = reduce_matching(pairs, 0)
    ends = [x for p in m for x in p]
    assert len(ends) == len(set(ends))
    assert lam >= 0 and len(m) + lam <= len(pairs)


def test_type_sets():
    assert type_sets(((2,), ((0, 1),)), {0, 1, 2, 3}) == ({3}, {0, 1}, {2})


def test_combine_examples():
    bag = {A, B, C}
    t1 = ((C,), ((A, B),))
    assert combine_cycle_types(t1, EMPTY, bag) == (t1, 0)
    t = ((), ((A, B),))
    assert combine_cycle_types(t, t, {A, B}) == (((A, B), ()), 1)
    assert combine_cycle_types(((A,), ()), ((), ((A, B),)), bag) is None


def test_combine_joins_paths():
    # a-b on one side and b-c on the other become one path a-c through b
    got = combine_cycle_types(((), ((A, B),)), ((), ((B, C),)), {A, B, C})
    assert got == (((B,), ((A, C),)), 0)


def test_edge_moves():
    assert _edge_moves(EMPTY, A, B) == [(((), ((A, B),)), 0)]
    assert _edge_moves(((), ((A, B),)), B, C) == [(((B,), ((A, C),)), 0)]
    assert _edge_moves(((), ((A, B),)), A, B) == [(((A, B), ()), 1)]
    assert _edge_moves(((), ((A, B), (C, D))), B, C) == [(((B, C), ((A, D),)), 0)]
    assert _edge_moves(((A,), ()), A, B) == []


def test_solver_examples():
    assert solve(Instance(complete_graph(3), frozenset(), 1, 1, Cycle())).answer
    two = disjoint_union(cycle_graph(6), cycle_graph(6))
    assert not solve(Instance(two, frozenset(), 0, 2, Cycle())).answer
    assert solve(Instance(complete_graph(4), frozenset(range(4)), 0, 2, Cycle())).answer
    assert not solve(Instance(complete_graph(3), frozenset(), 3, 0, Cycle())).answer


def test_errors():
    g = path_graph(3)
    with pytest.raises(ValueError):
        solve_cycle_dp(Instance(g, frozenset(), 1, 1, Cycle()), nice_decomposition(g))
    with pytest.raises(ValueError):
        solve(Instance(g, frozenset(), 1, 1, Edge()))
    # no edges: a decomposition without edge nodes is fine
    assert solve_cycle_dp(Instance(Graph(3), frozenset(), 0, 1, Cycle()),
                          nice_decomposition(Graph(3))).answer


def test_classes_in_range(rng):
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 7))
        nd = make_nice(compute_decomposition(g), g, with_edges=True)
        cap = 2 * (nd.width + 1)
        for k0, d0, l0, f in cycle_classes(Instance(g, frozenset(), 2, 3, Cycle()), nd):
            vals = [d for _, d in f]
            assert 0 in vals and not d0 and k0 <= 2 and l0 <= 2
            assert all(d == LOW or 0 <= d <= cap for d in vals)


def test_against_brute_and_fvs_all_graphs():
    for g in atlas_graphs(7):
        nd = make_nice(compute_decomposition(g), g, with_edges=True)
        for k in range(3):
            for ell in range(1, 3):
                inst = Instance(g, frozenset(), k, ell, Cycle())
                want = brute_hitpack(inst).answer
                assert solve_cycle_dp(inst, nd).answer == want, inst
                assert solve_cycle_fvs(inst).answer == want, inst


def test_against_brute_random_undeletable(rng):
    for _ in range(150):
        g = random_graph(rng, rng.randint(3, 9))
        inst = Instance(g, random_subset(rng, g.n), rng.randint(0, 2), rng.randint(1, 3), Cycle())
        assert solve(inst).answer == brute_hitpack(inst).answer, inst
