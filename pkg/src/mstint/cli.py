"""Command-line entry point: ``mstint <command> ...``."""

from __future__ import annotations

import argparse
import sys

from . import instance_io
from .extensions import (
    HELD_KARP_LIMIT,
    McpInstance,
    TspInstance,
    mcp_to_interdiction,
    shen_fixture,
    tsp_interdict,
    tsp_walk_length,
)
from .graphcore import mst_weight
from .levels import Reject, round_weights
from .pareto import extreme_supported_tuples
from .patterns import PartitionTower, analyze, block_recursions_hold, top_identities_hold
from .solver import TooLarge, exact_opt, prepare, solve


def _ids(ids) -> str:
    return instance_io._ids(ids)


def cmd_solve(args) -> int:
    report = solve(instance_io.parse(args.file), backend=args.backend)
    sys.stdout.write(instance_io.format_report(report))
    return 0


def cmd_exact(args) -> int:
    inst = instance_io.parse(args.file)
    removal, value = exact_opt(inst, limit=args.limit)
    rounded, _ = round_weights(inst)
    print(f"removal={_ids(removal)}")
    print(f"removal_cost={inst.cost(removal)}")
    print(f"weights={','.join(str(inst.edges[i].weight) for i in sorted(removal)) or '-'}")
    print(f"value={value}")
    print(f"rounded_value={mst_weight(rounded, inst.all_edges - removal)}")
    return 0


def cmd_pareto(args) -> int:
    rounded, _ = round_weights(instance_io.parse(args.file))
    prep = prepare(rounded)
    if prep.decomp is None:
        print("cost=0 val=0 witness=-")
        return 0
    front = extreme_supported_tuples(prep.decomp, backend=args.backend)
    for pt in front:
        print(f"cost={pt.cost} val={pt.value} witness={_ids(prep.to_rounded_ids(pt.witness))}")
    return 0


def cmd_verify(args) -> int:
    inst = instance_io.parse(args.file)
    removal = instance_io.parse_ids(args.removal)
    unknown = sorted(i for i in removal if not 0 <= i < inst.m)
    if unknown:
        print(f"error: unknown edge ids {unknown}", file=sys.stderr)
        return 2
    blocked = sorted(i for i in removal if not inst.edges[i].interdictable)
    cost = inst.cost(removal)
    feasible = cost <= inst.budget and not blocked
    rounded, _ = round_weights(inst)
    rest = inst.all_edges - removal
    print(f"removal={_ids(removal)}")
    print(f"removal_cost={cost}")
    print(f"budget={inst.budget}")
    print(f"non_interdictable={','.join(map(str, blocked)) or '-'}")
    print(f"feasible={str(feasible).lower()}")
    for label, graph in (("value", inst), ("rounded_value", rounded)):
        w = mst_weight(graph, rest)
        print(f"{label}={w if isinstance(w, int) else 'disconnected'}")

    try:
        prep = prepare(rounded)
    except Reject as exc:
        print(f"checks=skipped (cut {_ids(exc.cut)} of cost {exc.cost} fits the budget)")
        return 0 if feasible else 1
    if prep.decomp is None or blocked:
        print("checks=skipped")
        return 0 if feasible else 1
    decomp = prep.decomp
    back = {r: w for w, r in enumerate(prep.edge_map)}
    work = frozenset(back[i] for i in removal if i in back) & frozenset(decomp.ground)
    tower = PartitionTower(decomp, work)
    print(f"check.block_recursions={str(block_recursions_hold(tower)).lower()}")
    print(f"check.top_identities={str(top_identities_hold(tower)).lower()}")
    if decomp.cost(work) > decomp.budget:
        for name, ok in analyze(decomp, work).checks.items():
            print(f"check.{name}={str(ok).lower()}")
    return 0 if feasible else 1


def cmd_tsp(args) -> int:
    tsp = TspInstance(instance_io.parse(args.file))
    result = tsp_interdict(tsp)
    print(f"removal={_ids(result.removal)}")
    print(f"mst_value={result.mst_value}")
    print(f"tour_lower={result.lower}")
    print(f"tour_upper={result.upper}")
    if tsp.instance.n <= HELD_KARP_LIMIT:
        print(f"tour_length={tsp_walk_length(tsp, result.removal)}")
    return 0


def cmd_reduce_mcp(args) -> int:
    inst = instance_io.parse(args.file)
    pairs = tuple((e.u, e.v) for e in inst.edges)
    costs = tuple(e.cost for e in inst.edges) if args.costs else None
    if costs is not None and any(c < 1 for c in costs):
        print("error: --costs needs every edge to be interdictable", file=sys.stderr)
        return 2
    mcp = McpInstance(inst.n, pairs, args.q, costs)
    sys.stdout.write(instance_io.serialize(mcp_to_interdiction(mcp)))
    return 0


def cmd_gen(args) -> int:
    if args.budget is not None:
        policy = instance_io.BudgetPolicy.fixed(args.budget)
    elif args.below_cut:
        policy = instance_io.BudgetPolicy.below_cut(args.fraction)
    else:
        policy = instance_io.BudgetPolicy.fraction(args.fraction)
    inst = instance_io.generate(
        args.seed, args.n, args.m, args.max_weight, args.max_cost, policy, spanning_tree=args.tree
    )
    sys.stdout.write(instance_io.serialize(inst))
    return 0


def cmd_fixtures(args) -> int:
    sys.stdout.write(instance_io.serialize(shen_fixture()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mstint", description="MST interdiction tools")
    sub = parser.add_subparsers(dest="command", required=True)
    backends = ("auto", "exhaustive", "mnp")

    p = sub.add_parser("solve", help="approximate interdiction set and report")
    p.add_argument("file", help="instance file, '-' for stdin")
    p.add_argument("--backend", choices=backends, default="auto")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", help="optimal interdiction set by enumeration")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=22, help="max interdictable edges")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("pareto", help="extreme supported (cost, val) tuples")
    p.add_argument("file")
    p.add_argument("--backend", choices=backends, default="auto")
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("verify", help="feasibility, values and analysis checks for a removal set")
    p.add_argument("file")
    p.add_argument("removal", help="comma-separated edge ids, '-' for none")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tsp", help="tour interdiction via the MST")
    p.add_argument("file")
    p.set_defaults(func=cmd_tsp)

    p = sub.add_parser("reduce-mcp", help="component-maximisation instance as MST interdiction")
    p.add_argument("file", help="graph whose edge endpoints are used")
    p.add_argument("q", type=int, help="budget")
    p.add_argument("--costs", action="store_true", help="use the file's edge costs")
    p.set_defaults(func=cmd_reduce_mcp)

    p = sub.add_parser("gen", help="seeded random instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-weight", type=int, default=8)
    p.add_argument("--max-cost", type=int, default=5)
    p.add_argument("--budget", type=int, help="fixed budget")
    p.add_argument("--fraction", type=float, default=0.5, help="budget share of total cost")
    p.add_argument("--below-cut", action="store_true", help="keep the budget under the min cut")
    p.add_argument("--tree", action="store_true", help="start from a random spanning tree")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fixtures", help="built-in instances")
    p.add_argument("name", choices=("shen",))
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Reject as exc:
        print(f"reject: {exc}", file=sys.stderr)
        return 3
    except instance_io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (TooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
