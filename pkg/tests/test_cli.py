import json

import pytest
from click.testing import CliRunner

from conftest import random_graph, random_subset
from hitpack.cli import ALGOS, applicable, main
from hitpack.graph_core import (Clique, Cycle, Edge, Graph, Instance, Subgraph, complete_graph,
                                cycle_graph, emit_instance, parse_instance, path_graph)
from hitpack.packing_oracle import brute_count, check_solution
from hitpack.treewidth import INTRO_EDGE, parse_td, validate


@pytest.fixture
def run(tmp_path):
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)

    return go


def write(tmp_path, name, inst) -> str:
    p = tmp_path / name
    p.write_text(emit_instance(inst))
    return str(p)


@pytest.fixture
def k3(tmp_path):
    return write(tmp_path, "k3.hp", Instance(complete_graph(3), frozenset(), 1, 1, Cycle()))


def test_solve_brute_yes(run, k3):
    res = run("solve", "--algo", "brute", "--input", k3)
    assert res.exit_code == 0
    assert res.stdout.splitlines()[0] == "YES"


def test_solve_witness_and_json(run, k3):
    res = run("solve", "--algo", "cycle-fvs", "--input", k3, "--witness", "--json")
    lines = res.stdout.splitlines()
    assert lines[0] == "YES"
    wit = [int(x) for x in lines[1].split(",")]
    report = json.loads(lines[-1])
    assert report["answer"] == "YES" and report["witness"] == wit
    assert report["algorithm"] == "cycle-fvs" and report["seed"] == 0
    assert isinstance(report["elapsed"], float) and isinstance(report["counters"], dict)


def test_verify(run, k3):
    assert run("verify", "--input", k3, "--solution", "0").stdout.strip() == "VALID"
    assert run("verify", "--input", k3, "--solution", "").stdout.strip() == "INVALID"
    assert run("verify", "--input", k3, "--solution", "0,1").stdout.strip() == "INVALID"
    assert run("verify", "--input", k3, "--solution", "a").exit_code == 2


def test_dp_clique_two_edges(run, tmp_path):
    inst = Instance(Graph(4, [(0, 1), (2, 3)]), frozenset(), 0, 2, Clique(2))
    res = run("solve", "--algo", "dp-clique", "--input", write(tmp_path, "2e.hp", inst))
    assert res.exit_code == 0 and res.stdout.splitlines()[0] == "NO"


def test_oracle(run, k3):
    res = run("oracle", "--input", k3, "--witness")
    assert res.stdout.splitlines()[0] == "YES" and len(res.stdout.splitlines()) == 2


def test_family_mismatch_is_usage_error(run, k3):
    res = run("solve", "--algo", "edge-branch", "--input", k3)
    assert res.exit_code == 2


def test_parse_error_exit(run, tmp_path):
    bad = tmp_path / "bad.hp"
    bad.write_text("n 3\ne 0 5\nk 0\nl 1\nfamily edge\n")
    res = run("solve", "--algo", "brute", "--input", bad)
    assert res.exit_code == 2 and "line 2" in res.stderr
    assert run("solve", "--algo", "brute", "--input", tmp_path / "missing.hp").exit_code == 2


def test_dp_h_reports_solution_count(run, tmp_path):
    inst = Instance(path_graph(3), frozenset(), 1, 1, Subgraph(path_graph(3)))
    res = run("solve", "--algo", "dp-h", "--input", write(tmp_path, "p3.hp", inst), "--json")
    report = json.loads(res.stdout.splitlines()[-1])
    assert report["answer"] == "YES" and report["counters"]["solutions"] == 3


def test_dp_h_too_large(run, tmp_path):
    inst = Instance(complete_graph(9), frozenset(), 1, 1, Subgraph(path_graph(3)))
    res = run("solve", "--algo", "dp-h", "--input", write(tmp_path, "k9.hp", inst))
    assert res.exit_code == 2


def test_td_commands(run, tmp_path):
    path = write(tmp_path, "c5.hp", Instance(cycle_graph(5), frozenset(), 1, 1, Cycle()))
    res = run("td", "--input", path)
    td = parse_td(res.stdout)
    validate(td, cycle_graph(5))
    assert td.width == 2
    res = run("td", "--input", path, "--nice", "--edges")
    head, *rows = res.stdout.splitlines()
    assert head.startswith("c nice decomposition width 2")
    assert sum(r.split()[1] == INTRO_EDGE for r in rows) == 5
    out = tmp_path / "c5.td"
    run("td", "--input", path, "-o", out)
    assert parse_td(out.read_text()) == td


def test_supplied_td_is_used(run, tmp_path):
    path = write(tmp_path, "c4.hp", Instance(cycle_graph(4), frozenset(), 1, 1, Cycle()))
    tdp = tmp_path / "c4.td"
    tdp.write_text("s td 1 4 4\nb 1 1 2 3 4\n")
    res = run("solve", "--algo", "dp-cycle", "--input", path, "--td", tdp, "--json")
    assert res.stdout.splitlines()[0] == "YES"
    assert json.loads(res.stdout.splitlines()[-1])["counters"]["width"] == 3
    tdp.write_text("s td 1 2 4\nb 1 1 2\n")
    assert run("solve", "--algo", "dp-cycle", "--input", path, "--td", tdp).exit_code == 2


def test_gen_gadget(run, tmp_path):
    out = tmp_path / "t.hp"
    assert run("gen", "gadget", "tricyc", "--r", 2, "-o", out).exit_code == 0
    text = out.read_text()
    assert "# v " in text
    inst = parse_instance(text)
    assert inst.graph.n == 8 and inst.family == Clique(3)
    res = run("gen", "gadget", "diamond", "--h", "P4")
    assert parse_instance(res.stdout).graph.n == 5
    assert run("gen", "gadget", "lit", "--r", 2).exit_code == 2
    assert run("gen", "gadget", "sel").exit_code == 2


def test_gen_sus_and_solve(run, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 3 2\n1 2 -3 0\n-1 2 3 0\n")
    out = tmp_path / "fig.hp"
    run("gen", "sus-triangle", "--cnf", cnf, "--k", 1, "-o", out)
    inst = parse_instance(out.read_text())
    assert inst.graph.n == 30 and inst.ell == 8
    assert run("solve", "--algo", "h-branch", "--input", out).stdout.splitlines()[0] == "NO"


def test_gen_pw(run, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 3 1\n1 2 3 0\n")
    out = tmp_path / "pw.hp"
    assert run("gen", "3sat-triangle", "--cnf", cnf, "-o", out).exit_code == 0
    inst = parse_instance(out.read_text())
    assert inst.ell == 711
    validate(parse_td((tmp_path / "pw.hp.td").read_text()), inst.graph)
    # without preprocessing the single clause is not a legal input
    assert run("gen", "3sat-triangle", "--cnf", cnf, "--raw").exit_code == 2
    six = tmp_path / "six.cnf"
    six.write_text("p cnf 3 6\n1 2 3 0\n-1 2 3 0\n1 -2 3 0\n1 2 -3 0\n-1 -2 3 0\n-1 2 -3 0\n")
    res = run("gen", "3sat-c4", "--cnf", six, "--raw", "-o", tmp_path / "c4.hp")
    assert res.exit_code == 0
    assert parse_instance((tmp_path / "c4.hp").read_text()).ell == 249


def test_gen_decided_by_units(run, tmp_path):
    cnf = tmp_path / "u.cnf"
    cnf.write_text("p cnf 1 2\n1 0\n-1 0\n")
    res = run("gen", "3sat-triangle", "--cnf", cnf)
    assert res.exit_code == 0 and "UNSAT" in res.stdout


def test_gen_triangle_to_h(run, k3, tmp_path):
    tri = write(tmp_path, "t.hp", Instance(complete_graph(3), frozenset(), 0, 1, Clique(3)))
    res = run("gen", "triangle-to-h", "--input", tri, "--h", "P3", "--chain-len", 1)
    inst = parse_instance(res.stdout)
    assert inst.ell == 4 and inst.family == Subgraph(path_graph(3))
    assert run("gen", "triangle-to-h", "--input", k3, "--h", "P3").exit_code == 2
    assert run("gen", "triangle-to-h", "--input", tri, "--h", "X9").exit_code == 2


def test_pm_and_matchfn(run, tmp_path):
    c4 = write(tmp_path, "c4.hp", Instance(cycle_graph(4), frozenset(), 0, 1, Edge()))
    assert run("pm", "--input", c4).stdout.strip() == "PM"
    k3 = write(tmp_path, "k3e.hp", Instance(complete_graph(3), frozenset(), 0, 1, Edge()))
    assert run("pm", "--input", k3, "--seed", 7).stdout.strip() == "NO-PM"
    res = run("matchfn", "--n", 3, "--k", 2)
    assert res.stdout.splitlines() == ["family,k,distinct,size", "all-n3,2,5,8"]
    assert run("matchfn", "--n", 2, "--k", 3).exit_code == 2


def test_same_invocation_same_output(run, tmp_path, rng):
    inst = Instance(random_graph(rng, 9), frozenset(), 2, 2, Cycle())
    path = write(tmp_path, "r.hp", inst)
    for algo in ("cycle-fvs", "dp-cycle", "brute"):
        outs = {run("solve", "--algo", algo, "--input", path, "--witness", "--seed", 5).stdout
                for _ in range(3)}
        assert len(outs) == 1
    pms = {run("pm", "--input", path, "--seed", 3, "--trials", 1).stdout for _ in range(3)}
    assert len(pms) == 1


FUZZ_FAMILIES = [Edge(), Clique(3), Subgraph(path_graph(3)), Subgraph(cycle_graph(4)), Cycle()]


def test_algorithms_agree_fuzz(run, tmp_path, rng):
    for i in range(40):
        g = random_graph(rng, rng.randint(1, 7))
        fam = FUZZ_FAMILIES[i % len(FUZZ_FAMILIES)]
        inst = Instance(g, random_subset(rng, g.n), rng.randint(0, 2), rng.randint(1, 2), fam)
        path = write(tmp_path, f"f{i}.hp", inst)
        answers = set()
        for algo in ALGOS:
            if not applicable(algo, fam):
                assert run("solve", "--algo", algo, "--input", path).exit_code == 2
                continue
            res = run("solve", "--algo", algo, "--input", path, "--witness")
            lines = res.stdout.splitlines()
            answers.add(lines[0])
            if lines[0] == "YES" and len(lines) > 1:
                assert check_solution(inst, [int(x) for x in lines[1].split(",") if x])
        assert answers == {"YES" if brute_count(inst) else "NO"}
