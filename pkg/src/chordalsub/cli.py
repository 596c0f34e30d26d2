"""Command line front end.

Subcommands: gen, theory, gamma, construct, gadget, oracle, experiment,
verify.  All emit JSON on stdout; the CHORDAL_SEED environment variable
overrides the master seed wherever one applies.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .certify import ConstructionResult
from .dense import clique_union_baseline, dense_lower_construct, path_power_construct
from .experiment import (
    ExperimentConfig,
    _sanitize_stats,
    run_experiment,
    verify_suite,
)
from .graph import RngSeed, gen_gnp, read_edge_list, write_edge_list
from .oracle import max_chordal_exact
from .sparse import build_Fj, power_path_gadget, sparse_construct, square_path_gadget
from .theory import (
    BoundaryAlphaError,
    dense_params,
    gamma_solve,
    k_alpha,
    theorem2_limit,
)


def _env_seed(default: int) -> int:
    env = os.environ.get("CHORDAL_SEED")
    return int(env) if env else default


def _parse_alpha(text: str) -> Fraction:
    return Fraction(text)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, default=str))


def _cmd_gen(args) -> int:
    g = gen_gnp(args.n, args.p, RngSeed(_env_seed(args.seed), args.stream))
    if args.out:
        write_edge_list(g, args.out)
    _emit({"n": g.n, "p": args.p, "seed": _env_seed(args.seed),
           "stream": args.stream, "edges": g.m, "out": args.out})
    return 0


def _cmd_theory(args) -> int:
    if args.alpha is not None:
        alpha = _parse_alpha(args.alpha)
        try:
            limit = theorem2_limit(alpha)
            ka = k_alpha(alpha) if alpha > Fraction(1, 2) else None
        except BoundaryAlphaError as exc:
            _emit({"alpha": str(alpha), "error": str(exc)})
            return 1
        _emit({"alpha": str(alpha), "kAlpha": ka, "limit": limit})
        return 0
    if args.n is None or args.p is None:
        print("theory needs either --alpha or both --n and --p", file=sys.stderr)
        return 2
    dp = dense_params(args.n, args.p)
    _emit({
        "p": dp.p,
        "gamma": dp.gamma,
        "kPlus": dp.k_plus,
        "kMinus": dp.k_minus,
        "sUpper": dp.s_upper,
        "ell": dp.ell_upper,
        "predictionCenter": dp.prediction_center,
        "predictionRadius": dp.prediction_radius,
    })
    return 0


def _cmd_gamma(args) -> int:
    sol = gamma_solve(args.p, args.tol)
    _emit({"p": sol.p, "gamma": sol.gamma, "residual": sol.residual,
           "iterations": sol.iterations})
    return 0


def _result_payload(res: ConstructionResult, args, extra: dict | None = None) -> dict:
    payload = {
        "method": res.method,
        "n": res.graph.n,
        "seed": _env_seed(args.seed),
        "edges": res.achieved_edges,
        "certified": True,
        "phaseStats": _sanitize_stats(res.phase_stats),
    }
    payload.update(extra or {})
    return payload


def _cmd_construct(args) -> int:
    seed = _env_seed(args.seed)
    if args.method == "sparse":
        if args.alpha is None:
            print("sparse construction needs --alpha", file=sys.stderr)
            return 2
        alpha = _parse_alpha(args.alpha)
        import math

        p = math.exp(-float(alpha) * math.log(args.n))
        g = gen_gnp(args.n, p, RngSeed(seed))
        res = sparse_construct(g, alpha)
        extra = {
            "alpha": str(alpha),
            "p": p,
            "tilesPlaced": res.phase_stats.get("tilesPlaced", 0),
            "gadget": res.phase_stats.get("gadget"),
            "forestEdgesAdded": res.phase_stats.get("forestEdgesAdded", 0),
        }
    else:
        if args.p is None:
            print(f"{args.method} needs --p", file=sys.stderr)
            return 2
        g = gen_gnp(args.n, args.p, RngSeed(seed))
        if args.method == "dense-lb":
            res = dense_lower_construct(g, p=args.p, k=args.k, v_fraction=args.v_fraction)
        elif args.method == "clique-union":
            k = args.k if args.k is not None else res_k_default(args.n, args.p)
            res = clique_union_baseline(g, k)
        else:
            res = path_power_construct(g, m=args.m, k=args.k, p=args.p)
        extra = {"p": args.p}
    if args.emit:
        write_edge_list(res.subgraph.to_graph(), args.emit)
        extra["emitted"] = args.emit
    _emit(_result_payload(res, args, extra))
    return 0


def res_k_default(n: int, p: float) -> int:
    from .theory import log_recip

    return max(2, round(log_recip(n, p)))


def _cmd_gadget(args) -> int:
    if args.kind == "fj":
        if args.alpha is None:
            alpha = 1 / _parse_alpha(args.inv_alpha) if args.inv_alpha else None
        else:
            alpha = _parse_alpha(args.alpha)
        if alpha is None:
            print("fj gadgets need --alpha (or --inv-alpha)", file=sys.stderr)
            return 2
        gadget = build_Fj(alpha, args.j)
    elif args.kind == "square-path":
        gadget = square_path_gadget(args.k, args.copies)
    elif args.kind == "power-path":
        gadget = power_path_gadget(args.ell, args.length)
    else:
        print(f"unknown gadget kind {args.kind}", file=sys.stderr)
        return 2
    if args.emit:
        write_edge_list(gadget.graph, args.emit)
    _emit({
        "kind": gadget.kind,
        "vertices": gadget.graph.n,
        "edges": gadget.graph.m,
        "rho": str(gadget.rho),
        "rhoStar": None if gadget.rho_star is None else str(gadget.rho_star),
        "meta": gadget.meta,
        "emitted": args.emit,
    })
    return 0


def _cmd_oracle(args) -> int:
    g = read_edge_list(args.infile)
    res = max_chordal_exact(g, budget=args.budget)
    _emit({
        "optimum": res.optimum,
        "proved": res.proved,
        "nodesExplored": res.nodes_explored,
        "witness": [list(e) for e in res.witness_edges],
    })
    return 0


def _cmd_experiment(args) -> int:
    if args.config:
        with open(args.config, "r", encoding="ascii") as fh:
            cfg = ExperimentConfig.from_dict(json.load(fh))
    else:
        if not args.n_values or not args.methods:
            print("experiment needs --config or --n-values/--methods flags", file=sys.stderr)
            return 2
        if (args.p_values is None) == (args.alpha_values is None):
            print("give exactly one of --p-values / --alpha-values", file=sys.stderr)
            return 2
        overrides = {}
        if args.k is not None:
            overrides["k"] = args.k
        if args.m is not None:
            overrides["m"] = args.m
        if args.v_fraction is not None:
            overrides["v_fraction"] = args.v_fraction
        cfg = ExperimentConfig(
            n_values=[int(x) for x in args.n_values.split(",")],
            param_kind="p" if args.p_values else "alpha",
            param_values=(
                [float(x) for x in args.p_values.split(",")]
                if args.p_values else args.alpha_values.split(",")),
            methods=args.methods.split(","),
            seeds_per_cell=args.seeds,
            master_seed=_env_seed(args.master_seed),
            overrides=overrides,
            out_csv=args.out_csv,
            out_summary=args.out_summary,
            parallelism=args.parallelism,
        )
    if os.environ.get("CHORDAL_SEED"):
        cfg.master_seed = int(os.environ["CHORDAL_SEED"])
    records, summary = run_experiment(cfg)
    _emit({"trials": len(records), "summary": summary})
    return 0


def _cmd_verify(args) -> int:
    report = verify_suite(args.level)
    for name, ok, detail in report.checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    print(f"verify {report.level}: {'PASS' if report.passed else 'FAIL'} "
          f"({report.elapsed_s:.1f}s)")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chordalsub",
                                 description="chordal subgraphs of random graphs")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a seeded G(n,p) edge list")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--stream", type=int, default=0)
    g.add_argument("--out", type=str, default=None)
    g.set_defaults(fn=_cmd_gen)

    t = sub.add_parser("theory", help="dense parameters or sparse limits")
    t.add_argument("--n", type=int)
    t.add_argument("--p", type=float)
    t.add_argument("--alpha", type=str)
    t.set_defaults(fn=_cmd_theory)

    ga = sub.add_parser("gamma", help="solve the defining equation")
    ga.add_argument("--p", type=float, required=True)
    ga.add_argument("--tol", type=float, default=1e-12)
    ga.set_defaults(fn=_cmd_gamma)

    c = sub.add_parser("construct", help="run one construction on a seeded instance")
    c.add_argument("--method", required=True,
                   choices=["dense-lb", "path-power", "clique-union", "sparse"])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--p", type=float)
    c.add_argument("--alpha", type=str)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--k", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--v-fraction", dest="v_fraction", type=float)
    c.add_argument("--emit", type=str, default=None)
    c.set_defaults(fn=_cmd_construct)

    gd = sub.add_parser("gadget", help="build a tiling gadget")
    gd.add_argument("--kind", default="fj", choices=["fj", "square-path", "power-path"])
    gd.add_argument("--alpha", type=str, help="exact rational, e.g. 2/5")
    gd.add_argument("--inv-alpha", dest="inv_alpha", type=str,
                    help="exact rational 1/alpha, e.g. 5/2")
    gd.add_argument("--j", type=int, default=1)
    gd.add_argument("--k", type=int, default=1)
    gd.add_argument("--copies", type=int, default=1)
    gd.add_argument("--ell", type=int, default=2)
    gd.add_argument("--length", type=int, default=8)
    gd.add_argument("--emit", type=str, default=None)
    gd.set_defaults(fn=_cmd_gadget)

    o = sub.add_parser("oracle", help="exact maximum chordal subgraph of a file graph")
    o.add_argument("--in", dest="infile", required=True)
    o.add_argument("--budget", type=int, default=None)
    o.set_defaults(fn=_cmd_oracle)

    e = sub.add_parser("experiment", help="seeded sweep over a (n, param, method) grid")
    e.add_argument("--config", type=str, default=None)
    e.add_argument("--n-values", dest="n_values", type=str)
    e.add_argument("--p-values", dest="p_values", type=str)
    e.add_argument("--alpha-values", dest="alpha_values", type=str)
    e.add_argument("--methods", type=str)
    e.add_argument("--seeds", type=int, default=1)
    e.add_argument("--master-seed", dest="master_seed", type=int, default=0)
    e.add_argument("--out-csv", dest="out_csv", type=str)
    e.add_argument("--out-summary", dest="out_summary", type=str)
    e.add_argument("--parallelism", type=int, default=1)
    e.add_argument("--k", type=int)
    e.add_argument("--m", type=int)
    e.add_argument("--v-fraction", dest="v_fraction", type=float)
    e.set_defaults(fn=_cmd_experiment)

    v = sub.add_parser("verify", help="run the invariant battery")
    v.add_argument("--level", default="quick", choices=["quick", "full"])
    v.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
