"""``rdc`` command line entry point."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys

from . import harness, lowerbound, oracle
from .cost import INF, fraction_str, ratios, to_fraction
from .greedy import Greedy, StalledRun, worst_case_cost
from .instance_io import instance_to_dict, load_instance, save_instance


def _emit(rows: list[dict], fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        return json.dumps({**(extra or {}), "rows": rows}, indent=1)
    if not rows:
        return json.dumps(extra or {}) if fmt == "json" else ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
    head = [f"{k}: {v}" for k, v in (extra or {}).items()]
    lines = head + ["  ".join(c.ljust(widths[c]) for c in cols)]
    lines += ["  ".join(str(r[c]).ljust(widths[c]) for c in cols) for r in rows]
    return "\n".join(lines)


def _load(args):
    inst = load_instance(args.instance)
    if getattr(args, "scale_costs", None):
        from dataclasses import replace
        inst = replace(inst, costs=inst.costs.scaled(to_fraction(args.scale_costs)))
    return inst


def _parse_params(text: str) -> dict:
    out = {}
    for item in (text or "").split(","):
        if item.strip():
            k, _, v = item.partition("=")
            out[k.strip()] = v.strip()
    return out


def _family(args):
    p = _parse_params(args.params)
    if args.family == "learning":
        return lowerbound.gen_learning_lb(int(p.get("k", 10)), p.get("c2", "1"), p.get("c3", "8"))
    return lowerbound.gen_general_lb(p.get("g", "4"), p.get("r", "4"), p.get("c1", "1"), p.get("Q", "1"))


def cmd_run(args):
    inst = _load(args)
    trace = Greedy(inst, args.variant).run(args.hstar)
    extra = {"h_star": args.hstar, "total_cost": fraction_str(trace.total_cost), "reached_target": trace.reached_target}
    print(_emit(trace.as_rows(inst), args.format, extra))


def cmd_worstcase(args):
    inst = _load(args)
    cost, h, trace = worst_case_cost(args.variant, inst)
    extra = {"worst_cost": fraction_str(cost), "witness_h": h, "reached_target": trace.reached_target}
    print(_emit(trace.as_rows(inst), args.format, extra))


def cmd_opt(args):
    inst = _load(args)
    opt, tree = oracle.brute_force_opt(inst, memo=args.memo, max_actions=args.max_actions,
                                       max_hypotheses=args.max_hypotheses)
    doc = {"opt": fraction_str(opt), "memo": args.memo}
    if tree is not None:
        doc["policy"] = tree.to_dict(inst)
    print(json.dumps(doc, indent=1))


def cmd_check(args):
    inst = _load(args)
    ground = [(x, y) for x in inst.actions for y in range(inst.num_responses)]
    sampled = False
    if len(ground) > args.ground_size:
        ground = random.Random(args.seed).sample(ground, args.ground_size)
        sampled = True
    reports = oracle.check_all(inst, ground)
    if not args.all:
        reports = reports[:3]
    rows = [{"check": r.name, "passed": r.passed, "witness": json.dumps(r.witness) if r.witness else ""} for r in reports]
    print(_emit(rows, args.format, {"ground_pairs": len(ground), "sampled": sampled}))
    return 0 if all(r.passed for r in reports) or args.report_only else 1


def cmd_verify(args):
    inst = _load(args)
    cost, h, _ = worst_case_cost(args.variant, inst)
    opt, _ = oracle.brute_force_opt(inst, max_actions=args.max_actions, max_hypotheses=args.max_hypotheses)
    if opt == INF:
        print(json.dumps({"skipped": True, "reason": "OPT is infinite", "greedy_cost": fraction_str(cost)}))
        return 0
    f = inst.objective
    rep = oracle.verify_bound(args.kind, cost, opt, ratios(inst.costs), f.Q, f.eta, to_fraction(args.alpha))
    print(json.dumps({"passed": rep.passed, "witness_h": h, **rep.details}, indent=1))
    return 0 if rep.passed else 1


def cmd_genlower(args):
    fam = _family(args)
    inst = fam.instance
    if args.subdomain is not None:
        inst = fam.restricted(args.subdomain)
    if args.out:
        save_instance(inst, args.out)
    else:
        print(json.dumps(instance_to_dict(inst)))


def cmd_adversary(args):
    fam = _family(args)
    rep = lowerbound.adversary_report(fam, args.variant)
    doc = rep.as_dict(fam.instance)
    print(json.dumps(doc, indent=1))
    return 0 if rep.achieved or args.report else 1


def cmd_experiment(args):
    g = harness.load_edge_list(args.graph) if args.graph else harness.bundled_graph()
    g = g.largest_component()
    cm = harness.gen_partitions(g, args.communities, args.hypotheses, args.seed)
    inst = harness.build_experiment(g, cm, args.objective, args.Q, args.costs)
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    res = harness.run_experiment(inst, variants, args.sample_h, args.seed)
    res.meta = {
        "nodes": g.num_nodes, "communities": args.communities, "hypotheses": args.hypotheses,
        "objective": args.objective, "Q": fraction_str(inst.objective.Q), "costs": args.costs,
        "seed": args.seed, **ratios(inst.costs).as_dict(),
    }
    print(res.table(args.format))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rdc", description="Greedy covering and learning with response-dependent costs")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def instance_cmd(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--instance", required=True)
        sp.add_argument("--scale-costs", default=None, metavar="P/Q")
        sp.add_argument("--format", choices=("table", "csv", "json"), default="table")
        sp.set_defaults(fn=fn)
        return sp

    sp = instance_cmd("run", cmd_run, "run greedy against one true hypothesis")
    sp.add_argument("--variant", default="uf", choices=("uf", "u2", "u3"))
    sp.add_argument("--hstar", type=int, required=True)

    sp = instance_cmd("worstcase", cmd_worstcase, "worst-case greedy cost over all hypotheses")
    sp.add_argument("--variant", default="uf", choices=("uf", "u2", "u3"))

    for name, fn, help in (("opt", cmd_opt, "exact optimal worst-case cost"),
                           ("verify", cmd_verify, "check greedy cost against an approximation bound")):
        sp = instance_cmd(name, fn, help)
        sp.add_argument("--max-actions", type=int, default=12)
        sp.add_argument("--max-hypotheses", type=int, default=64)
        if name == "opt":
            sp.add_argument("--memo", choices=("auto", "vs", "pairs"), default="auto")
        else:
            sp.add_argument("--variant", default="uf", choices=("uf", "u2", "u3"))
            sp.add_argument("--kind", choices=("learning", "general", "crr_trivial"), required=True)
            sp.add_argument("--alpha", default="1")

    sp = instance_cmd("check", cmd_check, "exhaustive structural checks of the objective")
    sp.add_argument("--all", action="store_true", help="also check learning-objective and eta-gap properties")
    sp.add_argument("--ground-size", type=int, default=8)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--report-only", action="store_true", help="exit 0 even if a check fails")

    for name, fn, help in (("genlower", cmd_genlower, "generate a lower-bound instance"),
                           ("adversary", cmd_adversary, "run the lower-bound adversary")):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--family", choices=("learning", "general"), required=True)
        sp.add_argument("--params", default="", help="e.g. k=10,c2=1,c3=8 or g=4,r=4,c1=1")
        sp.set_defaults(fn=fn)
        if name == "genlower":
            sp.add_argument("--out", default=None)
            sp.add_argument("--subdomain", type=int, default=None, help="restrict to the subdomain of hypothesis n (0-based)")
        else:
            sp.add_argument("--variant", default="uf", choices=("uf", "u2", "u3"))
            sp.add_argument("--report", action="store_true", help="exit 0 even if the target ratio is not reached")

    sp = sub.add_parser("experiment", help="community experiment comparing utilities")
    sp.add_argument("--graph", default=None, help="SNAP edge list (default: bundled 40-node graph)")
    sp.add_argument("--communities", type=int, default=3)
    sp.add_argument("--hypotheses", type=int, default=100)
    sp.add_argument("--objective", choices=("edge_users", "vs_reduction"), default="edge_users")
    sp.add_argument("--Q", default=None)
    sp.add_argument("--costs", default="preferred-zero:1")
    sp.add_argument("--variants", default="uf,u2,u3")
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--sample-h", type=int, default=None)
    sp.add_argument("--format", choices=("table", "csv", "json"), default="table")
    sp.set_defaults(fn=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        rc = args.fn(args)
    except (ValueError, RuntimeError, OSError, KeyError, IndexError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, StalledRun) and exc.variant is not None:
            err["variant"] = exc.variant.value
        print(json.dumps(err), file=sys.stderr)
        return 2
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
