"""Command-line front end: ``hitpack solve|oracle|verify|td|gen|pm|matchfn``.

Exit status is 0 whenever an answer was computed (YES or NO) and 2 for usage
or parse errors. Answers go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import click

from hitpack import algebraic, reductions
from hitpack.branching import FamilyError, solve_edge_branch, solve_h_branch
from hitpack.cycle_fvs import solve_cycle_fvs
from hitpack.dp_clique import solve_clique_dp
from hitpack.dp_cycle import solve_cycle_dp
from hitpack.dp_hgraph import TooLargeError, solve_hgraph_dp
from hitpack.graph_core import (Clique, Cycle, Graph, Instance, ParseError, Subgraph,
                                clique_size, complete_graph, cycle_graph, emit_instance,
                                parse_instance, path_graph)
from hitpack.packing_oracle import brute_hitpack, check_solution
from hitpack.treewidth import (DecompositionError, emit_td, make_nice, compute_decomposition,
                               parse_td, validate)

ALGOS = ["brute", "edge-branch", "h-branch", "cycle-fvs", "dp-clique", "dp-h", "dp-cycle"]


def applicable(algo: str, family) -> bool:
    if algo == "brute":
        return True
    if algo == "edge-branch":
        return clique_size(family) == 2
    if algo in ("h-branch", "dp-h"):
        if isinstance(family, Subgraph):
            return algo == "h-branch" or family.h.n >= 2
        return algo == "h-branch" and clique_size(family) is not None
    if algo == "dp-clique":
        return clique_size(family) is not None
    if algo in ("cycle-fvs", "dp-cycle"):
        return isinstance(family, Cycle)
    raise ValueError(f"unknown algorithm {algo!r}")


def run_solver(algo: str, inst: Instance, td=None, stats: dict | None = None):
    """(answer, witness or None); raises FamilyError on a mismatch."""
    if not applicable(algo, inst.family):
        raise FamilyError(f"{algo} does not handle this object family")
    stats = stats if stats is not None else {}
    if algo == "brute":
        v = brute_hitpack(inst)
    elif algo == "edge-branch":
        v = solve_edge_branch(inst, stats)
    elif algo == "h-branch":
        v = solve_h_branch(inst, stats)
    elif algo == "cycle-fvs":
        v = solve_cycle_fvs(inst, stats)
    else:
        if td is None:
            td = compute_decomposition(inst.graph)
        nd = make_nice(td, inst.graph, with_edges=algo == "dp-cycle")
        stats["width"] = nd.width
        if algo == "dp-clique":
            v = solve_clique_dp(inst, nd, stats)
        elif algo == "dp-cycle":
            v = solve_cycle_dp(inst, nd, stats)
        else:
            count, v = solve_hgraph_dp(inst, nd, stats)
            stats["solutions"] = count
    return v.answer, v.witness


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise click.UsageError(f"cannot read {path}: {e.strerror}")


def _load_instance(path: str) -> Instance:
    try:
        return parse_instance(_read(path))
    except ParseError as e:
        raise click.UsageError(f"{path}: {e}")


def _load_td(path: str, g: Graph):
    try:
        td = parse_td(_read(path))
        validate(td, g)
    except (ParseError, DecompositionError) as e:
        raise click.UsageError(f"{path}: {e}")
    return td


def _write(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(out).write_text(text, encoding="utf-8")


def _pattern(text: str) -> Graph:
    """K<q>, C<n>, P<n> or a path to an instance file whose graph is H."""
    kind, num = text[:1].upper(), text[1:]
    if kind in "KCP" and num.isdigit():
        n = int(num)
        if kind == "K" and n >= 1:
            return complete_graph(n)
        if kind == "C" and n >= 3:
            return cycle_graph(n)
        if kind == "P" and n >= 1:
            return path_graph(n)
        raise click.UsageError(f"bad pattern {text!r}")
    return _load_instance(text).graph


@click.group()
def main():
    """Solvers and instance generators for X-HitPack."""


def _solve(algo, input_path, td_path, witness, seed, as_json):
    inst = _load_instance(input_path)
    td = _load_td(td_path, inst.graph) if td_path else None
    stats = {}
    start = time.perf_counter()
    try:
        answer, wit = run_solver(algo, inst, td, stats)
    except FamilyError as e:
        raise click.UsageError(str(e))
    except TooLargeError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    elapsed = time.perf_counter() - start
    if wit is not None:
        assert check_solution(inst, wit), "solver returned an invalid witness"
    click.echo("YES" if answer else "NO")
    if witness and answer:
        if wit is None:
            click.echo(f"{algo} does not produce witnesses", err=True)
        else:
            click.echo(",".join(map(str, sorted(wit))))
    if as_json:
        report = {"answer": "YES" if answer else "NO",
                  "witness": sorted(wit) if wit is not None else None,
                  "algorithm": algo, "elapsed": round(elapsed, 6), "seed": seed,
                  "counters": {k: v for k, v in stats.items() if isinstance(v, (int, float))}}
        click.echo(json.dumps(report, sort_keys=True))


@main.command()
@click.option("--algo", type=click.Choice(ALGOS), required=True)
@click.option("--input", "input_path", required=True)
@click.option("--td", "td_path", default=None, help="PACE .td file to use instead of computing one.")
@click.option("--witness", is_flag=True, help="Also print a deletion set on YES.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Finish with a JSON run report.")
def solve(algo, input_path, td_path, witness, seed, as_json):
    """Decide an instance with the chosen algorithm."""
    _solve(algo, input_path, td_path, witness, seed, as_json)


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--witness", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
def oracle(input_path, witness, as_json):
    """Decide an instance by exhaustive search."""
    _solve("brute", input_path, None, witness, 0, as_json)


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--solution", required=True, help='Comma-separated vertex ids, e.g. "0,3".')
def verify(input_path, solution):
    """Check that a deletion set hits every packing of size l."""
    inst = _load_instance(input_path)
    try:
        s = [int(x) for x in solution.replace(" ", "").split(",") if x]
    except ValueError:
        raise click.UsageError("solution must be comma-separated integers")
    click.echo("VALID" if check_solution(inst, s) else "INVALID")


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--nice", is_flag=True, help="Print the nice decomposition node list.")
@click.option("--edges", is_flag=True, help="With --nice, add introduce-edge nodes.")
@click.option("-o", "out", default=None)
def td(input_path, nice, edges, out):
    """Compute a tree decomposition of the instance graph."""
    g = _load_instance(input_path).graph
    dec = compute_decomposition(g)
    if not nice:
        _write(emit_td(dec), out)
        return
    nd = make_nice(dec, g, with_edges=edges)
    lines = [f"c nice decomposition width {nd.width} root {nd.root}"]
    for i in range(len(nd)):
        arg = nd.arg[i]
        arg = "-" if arg is None else (f"{arg[0]}-{arg[1]}" if isinstance(arg, tuple) else str(arg))
        kids = ",".join(map(str, nd.children[i])) or "-"
        bag = " ".join(map(str, sorted(nd.bag[i])))
        lines.append(f"{i} {nd.kind[i]} {arg} {kids} {bag}".rstrip())
    _write("\n".join(lines) + "\n", out)


@main.group()
def gen():
    """Generate instances from gadgets and formulas."""


def _load_cnf(path):
    try:
        return reductions.parse_dimacs(_read(path))
    except ParseError as e:
        raise click.UsageError(f"{path}: {e}")


def _emit_with_td(inst, dec, out):
    text = emit_instance(inst)
    _write(text, out)
    if out is not None:
        Path(out + ".td").write_text(emit_td(dec), encoding="utf-8")
    else:
        click.echo(emit_td(dec), nl=False)


@gen.command("gadget")
@click.argument("kind", type=click.Choice(["tricyc", "sel", "lit", "clit", "csel", "diamond"],
                                          case_sensitive=False))
@click.option("--r", "r", type=int, default=None)
@click.option("--h", "h", default=None, help="Pattern for diamond: K<q>, C<n>, P<n> or a file.")
@click.option("-o", "out", default=None)
def gen_gadget(kind, r, h, out):
    """Write a gadget as an instance (k=0, l=1) with its named vertices as comments."""
    kind = kind.lower()
    pattern = _pattern(h) if h else None
    if kind in ("tricyc", "sel", "lit", "clit") and r is None:
        raise click.UsageError(f"{kind} needs --r")
    try:
        gad = reductions.gen_gadget(kind, r, pattern)
    except ValueError as e:
        raise click.UsageError(str(e))
    if kind in ("clit", "csel"):
        family = Subgraph(cycle_graph(4))
    elif kind == "diamond":
        family = Subgraph(pattern)
    else:
        family = Clique(3)
    inst = Instance(gad.graph, frozenset(), 0, 1, family)
    head = [f"# {name} {' '.join(map(str, vs))}" for name, vs in sorted(gad.names.items())]
    _write("\n".join(head + [emit_instance(inst)]), out)


@gen.command("sus-triangle")
@click.option("--cnf", "cnf_path", required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("-o", "out", default=None)
def gen_sus(cnf_path, k, out):
    """Triangle instance that is YES iff the formula has an unsatisfiable subformula of <= k clauses."""
    cnf = _load_cnf(cnf_path)
    try:
        inst = reductions.sus_to_triangle(cnf, k)
    except ValueError as e:
        raise click.UsageError(str(e))
    _write(emit_instance(inst), out)


def _gen_pw(cnf_path, raw, out, mode, build):
    cnf = _load_cnf(cnf_path)
    if not raw:
        pre = reductions.preprocess_3sat(cnf, mode)
        if pre.cnf is None:
            click.echo(f"formula decided by unit propagation: {'SAT' if pre.decided else 'UNSAT'}")
            return
        cnf = pre.cnf
    try:
        inst, dec = build(cnf)
    except ValueError as e:
        raise click.UsageError(str(e))
    _emit_with_td(inst, dec, out)


@gen.command("3sat-triangle")
@click.option("--cnf", "cnf_path", required=True)
@click.option("--raw", is_flag=True, help="Skip preprocessing; the formula must already fit.")
@click.option("-o", "out", default=None, help="Instance file; the decomposition goes to OUT.td.")
def gen_3sat_triangle(cnf_path, raw, out):
    """Bounded-pathwidth triangle instance from a 3-CNF."""
    _gen_pw(cnf_path, raw, out, "triangle", reductions.threesat_to_triangle_pw)


@gen.command("3sat-c4")
@click.option("--cnf", "cnf_path", required=True)
@click.option("--raw", is_flag=True)
@click.option("-o", "out", default=None)
def gen_3sat_c4(cnf_path, raw, out):
    """Bounded-pathwidth C4 instance from a 3-CNF."""
    _gen_pw(cnf_path, raw, out, "c4", reductions.threesat_to_c4_pw)


@gen.command("triangle-to-h")
@click.option("--input", "input_path", required=True)
@click.option("--h", "h", required=True, help="K<q>, C<n>, P<n> or an instance file.")
@click.option("--chain-len", type=int, default=None)
@click.option("-o", "out", default=None)
def gen_triangle_to_h(input_path, h, chain_len, out):
    """Replace every triangle vertex by a chain of diamonds for pattern H."""
    inst = _load_instance(input_path)
    try:
        res = reductions.triangle_to_h(inst, _pattern(h), chain_len)
    except ValueError as e:
        raise click.UsageError(str(e))
    _write(emit_instance(res), out)


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--trials", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def pm(input_path, trials, seed):
    """Randomized perfect-matching test on the instance graph."""
    g = _load_instance(input_path).graph
    click.echo("PM" if algebraic.has_pm_algebraic(g, trials, seed) else "NO-PM")


@main.command()
@click.option("--n", "n", type=int, required=True, help="Count over all labeled graphs on n vertices.")
@click.option("--k", "k", type=int, required=True)
def matchfn(n, k):
    """CSV row: family-id, k, distinct matching functions, family size."""
    if not 0 <= k <= n or n > 7:
        raise click.UsageError("need 0 <= k <= n <= 7")
    family = list(algebraic.all_graphs(n))
    count = algebraic.count_distinct_match_functions(family, k)
    click.echo("family,k,distinct,size")
    click.echo(f"all-n{n},{k},{count},{len(family)}")


if __name__ == "__main__":
    main()
