"""Acceptance criteria 1-8. Each test records one PASS/FAIL line shown in the terminal summary."""

import random
import time
from contextlib import contextmanager
from itertools import combinations

import pytest

from conftest import ACCEPTANCE, atlas_graphs, random_graph, random_subset
from hitpack.algebraic import all_graphs, has_pm_algebraic, lift_query, match_function
from hitpack.cli import applicable, run_solver
from hitpack.cycle_fvs import solve_cycle_fvs
from hitpack.dp_cycle import solve_cycle_dp
from hitpack.graph_core import (Clique, Cycle, Edge, Subgraph, Instance, cycle_graph, delete_vertices,
                                path_graph)
from hitpack.matching import matching_number
from hitpack.packing_oracle import Packer, brute_count, brute_hitpack, max_packing
from hitpack.reductions import (Cnf, brute_sus, clit, lit, preprocess_3sat, sus_to_triangle,
                                threesat_to_c4_pw, threesat_to_triangle_pw, tricyc)
from hitpack.treewidth import compute_decomposition, make_nice, validate

pytestmark = pytest.mark.acceptance

SOLVERS = ["edge-branch", "h-branch", "cycle-fvs", "dp-clique", "dp-h", "dp-cycle"]
GRID_FAMILIES = [Edge(), Clique(3), Subgraph(path_graph(3)), Subgraph(cycle_graph(4)), Cycle()]


@contextmanager
def criterion(num: int, summary: str):
    """Record PASS unless the body raises; the failure still propagates."""
    try:
        yield
    except BaseException as e:
        ACCEPTANCE[num] = (False, f"{summary}: {type(e).__name__}: {str(e)[:200]}")
        raise
    ACCEPTANCE[num] = (True, summary)


def grid_graphs():
    rng = random.Random(1)
    graphs = atlas_graphs(5)
    for n in (6, 7):
        graphs += [random_graph(rng, n) for _ in range(300)]
    return graphs


@pytest.fixture(scope="module")
def grid():
    """Run every applicable solver on the criterion 1 grid once; criteria 1 and 8 read it."""
    rng = random.Random(2)
    out = {"runs": 0, "wrong": [], "count_checks": 0, "count_wrong": []}
    start = time.perf_counter()
    graphs = grid_graphs()
    for g in graphs:
        td = compute_decomposition(g)
        for und in (frozenset(), random_subset(rng, g.n)):
            for fam in GRID_FAMILIES:
                for k in range(3):
                    for ell in range(3):
                        inst = Instance(g, und, k, ell, fam)
                        want = brute_hitpack(inst).answer
                        for algo in SOLVERS:
                            if not applicable(algo, fam):
                                continue
                            stats = {}
                            got, _ = run_solver(algo, inst, td, stats)
                            out["runs"] += 1
                            if got != want:
                                out["wrong"].append((algo, inst))
                            if algo == "dp-h":
                                out["count_checks"] += 1
                                if stats["solutions"] != brute_count(inst):
                                    out["count_wrong"].append(inst)
    out["graphs"] = len(graphs)
    out["elapsed"] = time.perf_counter() - start
    return out


def test_criterion_1_oracle_equivalence(grid):
    summary = (f"{grid['runs']} solver runs on {grid['graphs']} graphs, "
               f"{len(grid['wrong'])} disagreements, {grid['elapsed']:.0f}s (limit 600s)")
    with criterion(1, summary):
        assert not grid["wrong"], grid["wrong"][:3]
        assert grid["elapsed"] <= 600


def test_criterion_2_gadget_exactness():
    with criterion(2, "TriCyc(2..4), Lit(4), CLit(2) packing counts exact"):
        for r in (2, 3, 4):
            pk = Packer(tricyc(r).graph, Clique(3))
            assert pk.best() == r and len(pk.all_packings(r)) == 2
        gad = lit(4)
        pk = Packer(gad.graph, Clique(3))
        assert pk.best() == 12 and len(pk.all_packings(12)) == 1
        rest, _ = delete_vertices(gad.graph, gad.names["v"])
        assert max_packing(rest, Clique(3)) == 11
        pk = Packer(clit(2).graph, Subgraph(cycle_graph(4)))
        assert pk.best() == 6 and len(pk.all_packings(6)) == 2


def test_criterion_3_figure_instance():
    with criterion(3, "figure formula gives 30 vertices, l=8, brute answers NO"):
        inst = sus_to_triangle(Cnf(3, ((1, 2, -3), (-1, 2, 3))), 1)
        assert inst.graph.n == 30 and inst.ell == 8
        assert not brute_hitpack(inst).answer


def all_small_cnfs():
    for nv in (1, 2, 3):
        lits = [s * v for v in range(1, nv + 1) for s in (1, -1)]
        clauses = [c for size in (1, 2, 3) for c in combinations(lits, size)]
        for m in (1, 2, 3):
            for f in combinations(clauses, m):
                yield Cnf(nv, f)


def test_criterion_4_sus_round_trip():
    start = time.perf_counter()
    bad, total = [], 0
    for cnf in all_small_cnfs():
        # brute returns a smallest witness, so one call with k = m settles every k <= m
        v = brute_hitpack(sus_to_triangle(cnf, cnf.m))
        for k in range(cnf.m + 1):
            total += 1
            if (v.answer and len(v.witness) <= k) != brute_sus(cnf, k):
                bad.append((cnf, k))
    elapsed = time.perf_counter() - start
    with criterion(4, f"{total} (formula, k) pairs, {len(bad)} disagreements, "
                      f"{elapsed:.0f}s (limit 120s)"):
        assert not bad, bad[:3]
        assert elapsed <= 120


def test_criterion_5_matching_laws():
    rng = random.Random(5)
    lift_cases = 0
    with criterion(5, "1000 graphs: matching-function laws and Tutte test exact; "
                      "lift equivalence exhaustive for n <= 6, k <= 2"):
        for i in range(1000):
            g = random_graph(rng, rng.randint(0, 10))
            match_function(g, min(g.n, rng.randint(0, 4))).check()
            assert has_pm_algebraic(g, trials=3, seed=i) == (2 * matching_number(g) == g.n)
        for n in range(7):
            for g in all_graphs(n):
                d = matching_number(g)
                for k in range(min(n, 2) + 1):
                    for r in range(k + 1):
                        for s in combinations(range(k), r):
                            for x in range(-2 * n, 2 * min(d, k) + 1, 2):
                                if n - r - 2 * d + x >= 0:
                                    left, right = lift_query(g, k, s, x)
                                    assert left == right, (g, k, s, x)
                                    lift_cases += 1
        assert lift_cases > 0


def test_criterion_6_lower_bound_audit():
    with criterion(6, "triangle construction l=711, |Z|=24, width bound; C4 construction l=249, "
                      "|Z|=18, 9 CSel"):
        cnf = preprocess_3sat(Cnf(3, ((1, 2, 3),))).cnf
        m, c = cnf.m, 4
        assert m == 16
        inst, td = threesat_to_triangle_pw(cnf)
        assert inst.ell == 3 * m * (3 * c + 2) + 9 * c + 3 == 711
        validate(td, inst.graph)
        z = frozenset.intersection(*td.bags)
        assert len(z) == 6 * c == 24
        assert td.width <= 6 * c + lit(c + 1).graph.n
        six = Cnf(3, ((1, 2, 3), (-1, 2, 3), (1, -2, 3), (1, 2, -3), (-1, -2, 3), (-1, 2, -3)))
        inst, td = threesat_to_c4_pw(six)
        validate(td, inst.graph)
        assert inst.ell == 249
        assert len(frozenset.intersection(*td.bags)) == 18
        # one bag per gadget: 9 CSel bags, then one per literal occurrence
        assert len(td.bags) - 3 * six.m == 9


def test_criterion_7_cycle_pipeline():
    rng = random.Random(7)
    worst = 0.0
    bad = []
    for _ in range(200):
        g = random_graph(rng, rng.randint(1, 12), rng.uniform(0.1, 0.5))
        inst = Instance(g, random_subset(rng, g.n), rng.randint(0, 3), rng.randint(1, 3), Cycle())
        start = time.perf_counter()
        want = brute_hitpack(inst).answer
        fvs = solve_cycle_fvs(inst).answer
        nd = make_nice(compute_decomposition(g), g, with_edges=True)
        dp = solve_cycle_dp(inst, nd).answer
        worst = max(worst, time.perf_counter() - start)
        if not want == fvs == dp:
            bad.append(inst)
    with criterion(7, f"200 instances n <= 12, {len(bad)} disagreements, "
                      f"slowest {worst:.1f}s (limit 30s)"):
        assert not bad, bad[:3]
        assert worst <= 30


def test_criterion_8_counting(grid):
    summary = f"{grid['count_checks']} dp-h counts vs brute, {len(grid['count_wrong'])} wrong"
    with criterion(8, summary):
        assert grid["count_checks"] > 0
        assert not grid["count_wrong"], grid["count_wrong"][:3]
