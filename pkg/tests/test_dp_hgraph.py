import pytest

from conftest import atlas_graphs, random_graph, random_subset
from hitpack.branching import solve_h_branch
from hitpack.dp_hgraph import (DOWN, UP, TooLargeError, automorphisms, combine_types,
                               extend_type, hgraph_table, remove_type, solve_hgraph_dp)
from hitpack.graph_core import (Clique, Graph, Instance, Subgraph, complete_graph, cycle_graph,
                                path_graph)
from hitpack.packing_oracle import brute_count, brute_hitpack
from hitpack.treewidth import nice_decomposition

P3 = path_graph(3)
K2 = path_graph(2)


def solve(g, h, k, ell, und=frozenset()):
    return solve_hgraph_dp(Instance(g, und, k, ell, Subgraph(h)), nice_decomposition(g))


def test_extend_uncovered_is_identity():
    t = ((5, UP),)
    assert extend_type(t, 7, 0, Graph(8, [(5, 6)]), K2) == {t}


def test_extend_k2_existing_part():
    g = Graph(3, [(0, 1)])
    assert extend_type(((0, UP),), 1, 1, g, K2) == {((0, 1),)}
    # non-adjacent in G: no extension
    assert extend_type(((0, UP),), 2, 1, g, K2) == set()


def test_extend_new_part_one_type_per_vertex_of_h():
    g = Graph(8, [(5, 6), (6, 7)])
    got = extend_type((), 5, 1, g, P3)
    assert len(got) == P3.n
    # the two ends of P3 are swapped by an automorphism
    assert extend_type((), 5, 1, g, P3, automorphisms(P3)) == {((UP, UP, 5),), ((UP, 5, UP),)}


def test_extend_p3_part():
    g = Graph(8, [(5, 6), (6, 7)])
    assert extend_type(((5, UP, UP),), 6, 1, g, P3) == {((5, 6, UP),), ((5, UP, 6),)}
    # the middle of P3 sits on 5, so 6 can only be an end
    assert extend_type(((UP, 5, UP),), 6, 1, g, P3, automorphisms(P3)) == {((UP, 5, 6),)}


def test_extend_index_range():
    with pytest.raises(ValueError):
        extend_type((), 1, 2, Graph(2), K2)


def test_remove_cases():
    assert remove_type(((5, UP),), 7, K2) == (((5, UP),), 0)
    assert remove_type(((5, UP),), 5, K2) is None
    assert remove_type(((5, 6, UP),), 5, P3) == (((DOWN, 6, UP),), 0)
    assert remove_type(((5, 6, UP),), 6, P3) is None
    assert remove_type(((DOWN, 6, DOWN),), 6, P3) == ((), 1)
    assert remove_type(((5,),), 5, Graph(1)) == ((), 1)


def test_combine_cases():
    t = ((5, UP, UP),)
    assert combine_types(t, t) == {t}
    assert combine_types(((5, DOWN, UP),), ((5, UP, DOWN),)) == {((5, DOWN, DOWN),)}
    assert combine_types(((5, DOWN, UP),), ((5, DOWN, UP),)) == set()
    assert combine_types(((5, UP, UP),), ((6, UP, UP),)) == set()
    assert combine_types((), ((5, UP, UP),)) == set()


def test_combine_up_to_automorphism():
    auts = automorphisms(P3)
    got = combine_types(((DOWN, 5, UP),), ((UP, 5, DOWN),), auts)
    assert ((DOWN, 5, DOWN),) in got


def test_solver_examples():
    # all three singletons of P3 destroy the only copy; the empty set does not
    count, v = solve(P3, P3, 1, 1)
    assert count == 3 and v.answer
    count, v = solve(path_graph(5), P3, 0, 1)
    assert count == 0 and not v.answer
    assert solve(complete_graph(3), complete_graph(3), 1, 1)[0] == 3


def test_ell_zero_and_errors():
    count, v = solve(P3, P3, 3, 0)
    assert count == 0 and not v.answer
    nd = nice_decomposition(P3)
    with pytest.raises(ValueError):
        solve_hgraph_dp(Instance(P3, frozenset(), 1, 1, Clique(3)), nd)
    with pytest.raises(ValueError):
        solve_hgraph_dp(Instance(P3, frozenset(), 1, 1, Subgraph(Graph(1))), nd)
    with pytest.raises(ValueError):
        Subgraph(Graph(3, [(0, 1)]))


def test_too_large_is_refused():
    g = complete_graph(9)
    with pytest.raises(TooLargeError):
        solve(g, P3, 1, 1)


def test_table_values_in_range(rng):
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 6))
        h = rng.choice([P3, complete_graph(3), path_graph(4)])
        nd = nice_decomposition(g)
        table = hgraph_table(Instance(g, frozenset(), 2, 2, Subgraph(h)), nd)
        bound = (nd.width + 1) * h.n
        for (k0, d0, l0, f0) in table:
            vals = [c for _, c in f0]
            assert k0 <= 2 and not d0 and min(vals) == 0 and max(vals) <= bound


@pytest.mark.parametrize("h", [P3, complete_graph(3), cycle_graph(4), path_graph(4)],
                         ids=["P3", "K3", "C4", "P4"])
def test_against_brute_and_branching(h, rng):
    fam = Subgraph(h)
    for g in atlas_graphs(6):
        nd = nice_decomposition(g)
        und = random_subset(rng, g.n)
        for k in range(3):
            for ell in range(1, 3):
                inst = Instance(g, und, k, ell, fam)
                count, v = solve_hgraph_dp(inst, nd)
                assert count == brute_count(inst), inst
                assert v.answer == brute_hitpack(inst).answer == solve_h_branch(inst).answer


def test_automorphisms_do_not_change_counts(rng):
    for _ in range(40):
        g = random_graph(rng, rng.randint(2, 6))
        h = rng.choice([P3, cycle_graph(4), complete_graph(3)])
        inst = Instance(g, frozenset(), rng.randint(0, 2), rng.randint(1, 2), Subgraph(h))
        nd = nice_decomposition(g)
        assert solve_hgraph_dp(inst, nd)[0] == solve_hgraph_dp(inst, nd, use_automorphisms=False)[0]
