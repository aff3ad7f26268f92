"""Command-line entry point: ``nodesplit <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import bench
from .elimination import default_order, mbe, network_factors, trace_to_dot, ve
from .jointree import build_jointree, propagate
from .model import read_evidence, read_uai, serialize_evidence, serialize_uai
from .search import SearchOptions, format_log_line, split_bnb
from .splitting import BoundEvaluator, mapping_to_json
from .strategies import StrategyConfig, apply_strategy


def _load(args):
    net = read_uai(args.model)
    e = read_evidence(args.evid, net) if args.evid else {}
    return net, e


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2))


def _value_doc(log_value, argmax=None):
    doc = {"log": log_value, "value": math.exp(log_value)}
    if argmax is not None:
        doc["argmax"] = {str(v): argmax[v] for v in sorted(argmax)}
    return doc


def _split(net, e, args):
    cfg = StrategyConfig(args.heuristic, args.limit)
    sn, order_prime = apply_strategy(net, e, cfg)
    engine_order = None
    if order_prime is not None:
        seen = set(order_prime)
        engine_order = [v for v in range(sn.net.n) if v not in seen] + list(order_prime)
    return sn, engine_order


def cmd_exact(args):
    net, e = _load(args)
    op = "sum" if args.sum else "max"
    if args.engine == "ve":
        factors, origins = network_factors(net, e)
        value, _, x = ve(factors, default_order(net, e), op, origins, evidence=e)
    else:
        value, x = propagate(build_jointree(net), net, e, op)
    _emit(_value_doc(value, x))


def cmd_split(args):
    net, e = _load(args)
    sn, _ = _split(net, e, args)
    Path(args.out).write_text(serialize_uai(sn.net))
    Path(args.map).write_text(mapping_to_json(sn))
    _emit({"splits": len(sn.split_variables), "clones": sn.n_clones, "beta_log": sn.beta_log})


def cmd_bound(args):
    net, e = _load(args)
    sn, engine_order = _split(net, e, args)
    value, _ = BoundEvaluator(sn, args.engine, engine_order)(e, "sum" if args.sum else "max")
    doc = _value_doc(value)
    doc.update(splits=len(sn.split_variables), clones=sn.n_clones, beta_log=sn.beta_log)
    _emit(doc)


def cmd_search(args):
    net, e = _load(args)
    sn, engine_order = _split(net, e, args)
    logfile = open(args.log, "w") if args.log else None
    try:
        opts = SearchOptions(
            space=args.space,
            use_bound=not args.no_bound,
            engine=args.engine,
            engine_order=engine_order,
            max_nodes=args.max_nodes,
            log=(lambda *row: print(format_log_line(*row), file=logfile)) if logfile else None,
        )
        res = split_bnb(net, sn, e, opts)
    finally:
        if logfile:
            logfile.close()
    doc = _value_doc(res.mpe_log, res.argmax)
    doc.update(nodes=res.nodes_visited, bounds=res.bounds_evaluated, finished=res.finished,
               splits=len(sn.split_variables), clones=sn.n_clones)
    _emit(doc)


def cmd_gen_coding(args):
    spec = bench.CodingSpec(args.k, args.m, args.parity_parents, args.sigma, args.seed)
    net, e = bench.gen_coding_network(spec)
    Path(args.out + ".uai").write_text(serialize_uai(net))
    Path(args.out + ".evid").write_text(serialize_evidence(e))
    _emit({"name": spec.name, "variables": net.n, "evidence": len(e)})


def cmd_bench_coding(args):
    specs = bench.coding_ensemble(
        args.sigmas, args.seeds_per_sigma, args.k, args.m, args.parity_parents, args.first_seed
    )
    heuristics = [StrategyConfig(h, lim) for lim in args.limits for h in args.heuristics]
    with open(args.csv, "w", newline="") as fh:
        summary = bench.run_bench(
            specs, heuristics, args.spaces, fh, use_bound=not args.no_bound, max_nodes=args.max_nodes
        )
    _emit({"rows": len(summary.records), "failures": len(summary.failures), "censored": len(summary.censored)})


def cmd_trace(args):
    net, e = _load(args)
    factors, origins = network_factors(net, e)
    order = args.order if args.order else default_order(net, e)
    value, trace = mbe(factors, order, args.ibound, "max", origins)
    Path(args.dot).write_text(trace_to_dot(trace, [net.name(v) for v in range(net.n)]))
    _emit({"log": value, "iterations": len(trace), "max_scope": trace.max_scope_size()})


def _csv(kind):
    return lambda s: [kind(x) for x in s.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nodesplit", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def model_cmd(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("model")
        sp.add_argument("--evid")
        sp.add_argument("--engine", choices=["jointree", "ve"], default="jointree")
        sp.set_defaults(func=func)
        return sp

    def strategy_args(sp):
        sp.add_argument("--heuristic", choices=["mb", "jt"], required=True)
        sp.add_argument("--limit", type=int, required=True)

    sp = model_cmd("exact", cmd_exact, "exact MPE (or Pr(e) with --sum)")
    sp.add_argument("--sum", action="store_true")

    sp = model_cmd("split", cmd_split, "write a split network and its clone mapping")
    strategy_args(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--map", required=True)

    sp = model_cmd("bound", cmd_bound, "upper bound from a split network")
    strategy_args(sp)
    sp.add_argument("--sum", action="store_true")

    sp = model_cmd("search", cmd_search, "branch-and-bound MPE search")
    strategy_args(sp)
    sp.add_argument("--space", choices=["full", "reduced"], default="reduced")
    sp.add_argument("--no-bound", action="store_true")
    sp.add_argument("--log")
    sp.add_argument("--max-nodes", type=int)

    sp = model_cmd("trace", cmd_trace, "mini-bucket trace as DOT")
    sp.add_argument("--dot", required=True)
    sp.add_argument("--ibound", type=int, required=True)
    sp.add_argument("--order", type=_csv(int))

    sp = sub.add_parser("gen-coding", help="random coding network and its channel evidence")
    sp.add_argument("--k", type=int, default=16)
    sp.add_argument("--m", type=int, default=24)
    sp.add_argument("--parity-parents", type=int, default=4)
    sp.add_argument("--sigma", type=float, default=0.5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_gen_coding)

    sp = sub.add_parser("bench-coding", help="strategy/search sweep over coding networks")
    sp.add_argument("--sigmas", type=_csv(float), default=[0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
    sp.add_argument("--seeds-per-sigma", type=int, default=6)
    sp.add_argument("--first-seed", type=int, default=0)
    sp.add_argument("--k", type=int, default=16)
    sp.add_argument("--m", type=int, default=24)
    sp.add_argument("--parity-parents", type=int, default=4)
    sp.add_argument("--limits", type=_csv(int), default=list(range(5, 11)))
    sp.add_argument("--heuristics", type=_csv(str), default=["mb", "jt"])
    sp.add_argument("--spaces", type=_csv(str), default=["reduced"])
    sp.add_argument("--no-bound", action="store_true")
    sp.add_argument("--max-nodes", type=int)
    sp.add_argument("--csv", required=True)
    sp.set_defaults(func=cmd_bench_coding)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except (ValueError, OSError) as err:
        print(f"nodesplit: error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
