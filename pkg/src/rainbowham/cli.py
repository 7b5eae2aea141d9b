"""Command-line interface.

Exit codes: 0 success, 1 the operation ran but the sought object was not
found / verification failed, 2 bad input or unmet precondition.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .adversary import (
    CounterexampleCertificate,
    build_counterexample,
    build_counterexample_scaled,
    corollary_parameters,
    proposition_parameters,
    verify_counterexample,
)
from .errors import (
    BudgetExceededError,
    GraphFormatError,
    PreconditionError,
    StageFailure,
)
from .forest import rainbow_forest
from .graph import distinct_colours_of, dumps, load, validate
from .instances import InstanceSpec, generate_instance
from .oracle import (
    OracleBudget,
    max_colour_hamilton_bruteforce,
    max_rainbow_matching_exact,
)
from .pipeline import PipelineParams, near_rainbow_hamilton, proper_colouring_hamilton
from .regularize import regular_spanning_subgraph
from .suite import run_suite


def _emit(args, doc: dict, text_lines: list[str]) -> None:
    if args.quiet:
        return
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        for line in text_lines:
            print(line)


def _cmd_gen(args) -> int:
    spec = InstanceSpec(
        n=args.n,
        epsilon=args.epsilon,
        colouring_mode=args.mode,
        num_colours=args.colours,
        target_bound=args.bound,
        seed=args.seed,
    )
    g = generate_instance(spec)
    out = dumps(g)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def _cmd_validate(args) -> int:
    g = load(args.graph)
    rep = validate(g)
    _emit(
        args,
        {
            "n": g.n,
            "edges": g.num_edges,
            "proper": rep.is_proper,
            "max_colour_multiplicity": rep.max_colour_multiplicity,
            "distinct_colours": rep.distinct_colours,
            "min_degree": rep.min_degree,
        },
        [
            f"n={g.n} edges={g.num_edges} proper={rep.is_proper} "
            f"bounded={rep.max_colour_multiplicity} "
            f"colours={rep.distinct_colours} min_degree={rep.min_degree}"
        ],
    )
    return 0 if rep.is_proper else 1


def _cmd_regularize(args) -> int:
    g = load(args.graph)
    res = regular_spanning_subgraph(g, seed=args.seed)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(res.subgraph))
    _emit(
        args,
        {"r": res.r, "edges": res.subgraph.num_edges},
        [f"r={res.r} edges={res.subgraph.num_edges}"],
    )
    return 0


def _cmd_forest(args) -> int:
    g = load(args.graph)
    forest, rep = rainbow_forest(
        g, alpha=args.alpha, seed=args.seed, epsilon=args.epsilon
    )
    doc = {
        "num_paths": rep.num_paths,
        "vertices_covered": rep.v_f,
        "edges": rep.e_f,
        "m": rep.m,
        "r": rep.r,
        "rainbow": forest.rainbow,
        "slab_sizes": list(rep.slab_sizes),
        "leftover": len(rep.leftover),
        "warnings": list(rep.warnings),
    }
    if args.paths:
        doc["paths"] = [list(p) for p in forest.paths]
    _emit(
        args,
        doc,
        [
            f"paths={rep.num_paths} vertices={rep.v_f} edges={rep.e_f} "
            f"m={rep.m} r={rep.r} rainbow={forest.rainbow}"
        ],
    )
    return 0 if forest.rainbow else 1


def _cmd_solve(args) -> int:
    g = load(args.graph)
    params = PipelineParams(epsilon=args.epsilon, seed=args.seed)
    if args.any_proper:
        result = proper_colouring_hamilton(g, params)
    else:
        result = near_rainbow_hamilton(g, params)
    doc = {
        "n": g.n,
        "distinct_colours": result.distinct_colours,
        "ratio": result.distinct_colours / g.n,
        "stage_log": result.stage_log,
    }
    if args.cycle:
        doc["cycle"] = list(result.cycle)
    _emit(
        args,
        doc,
        [
            f"hamilton cycle found: {result.distinct_colours}/{g.n} distinct "
            f"colours ({result.distinct_colours / g.n:.3f})"
        ],
    )
    return 0


def _cmd_adversary_gen(args) -> int:
    if args.preset == "proposition":
        params = proposition_parameters(args.c, args.n)
        g, cert = build_counterexample(params, seed=args.seed)
    elif args.preset == "corollary":
        params = corollary_parameters(args.n)
        g, cert = build_counterexample(params, seed=args.seed)
    else:
        g, cert = build_counterexample_scaled(
            args.n, args.m, args.t, args.q, args.ell, seed=args.seed
        )
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(dumps(g))
    with open(args.certificate, "w", encoding="utf-8") as fh:
        json.dump(cert.to_dict(), fh, indent=2)
        fh.write("\n")
    _emit(
        args,
        {"n": g.n, "edges": g.num_edges, "derived_bound": cert.derived_bound},
        [f"n={g.n} edges={g.num_edges} colour bound={cert.derived_bound}"],
    )
    return 0


def _cmd_adversary_verify(args) -> int:
    g = load(args.graph)
    with open(args.certificate, "r", encoding="utf-8") as fh:
        cert = CounterexampleCertificate.from_dict(json.load(fh))
    rep = verify_counterexample(g, cert)
    _emit(
        args,
        {
            "apex_ok": rep.apex_ok,
            "colours_ok": rep.colours_ok,
            "proper_bounded_ok": rep.proper_bounded_ok,
            "degree_ok": rep.degree_ok,
            "derived_bound": rep.derived_bound,
            "all_ok": rep.all_ok,
            "details": list(rep.details),
        },
        [f"all_ok={rep.all_ok} bound={rep.derived_bound}"]
        + [f"  {d}" for d in rep.details],
    )
    return 0 if rep.all_ok else 1


def _cmd_oracle_hamilton(args) -> int:
    g = load(args.graph)
    budget = OracleBudget(max_vertices_hamilton=args.budget)
    count, cycle = max_colour_hamilton_bruteforce(g, budget)
    if count is None:
        _emit(args, {"hamiltonian": False}, ["no Hamilton cycle"])
        return 1
    _emit(
        args,
        {"hamiltonian": True, "max_distinct_colours": count, "cycle": list(cycle)},
        [f"max distinct colours = {count}", f"cycle: {list(cycle)}"],
    )
    return 0


def _cmd_oracle_matching(args) -> int:
    g = load(args.graph)
    budget = OracleBudget(max_vertices_matching=args.budget)
    matching = max_rainbow_matching_exact(g, budget)
    colours = distinct_colours_of(g, matching)
    _emit(
        args,
        {"size": len(matching), "colours": colours,
         "edges": [list(e) for e in matching]},
        [f"maximum rainbow matching size = {len(matching)}"],
    )
    return 0


def _cmd_suite(args) -> int:
    report = run_suite(
        args.name, trials=args.trials, seed=args.seed, n=args.n, epsilon=args.epsilon
    )
    out = report.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    if not args.quiet:
        if args.format == "json":
            sys.stdout.write(out)
        else:
            print(
                f"suite={report.suite} trials={report.trials} "
                f"successes={report.successes} rate={report.success_rate:.2f} "
                f"elapsed={report.elapsed:.1f}s"
            )
    return 0 if report.failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rainbowham",
        description="Near-rainbow Hamilton cycles in dense edge-coloured graphs.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root seed")
    common.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )
    common.add_argument("--quiet", action="store_true", help="suppress report output")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", parents=[common], help="generate a coloured instance")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument(
        "--mode",
        choices=("rainbow", "round_robin", "vizing_like"),
        default="round_robin",
    )
    sp.add_argument("--colours", type=int, default=None)
    sp.add_argument("--bound", type=int, default=None, help="colour class cap")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("validate", parents=[common], help="validate a graph file")
    sp.add_argument("graph")
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser(
        "regularize", parents=[common], help="extract an even regular subgraph"
    )
    sp.add_argument("graph")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=_cmd_regularize)

    sp = sub.add_parser("forest", parents=[common], help="build a rainbow path forest")
    sp.add_argument("graph")
    sp.add_argument("--alpha", type=float, default=0.25)
    sp.add_argument("--epsilon", type=float, default=0.05)
    sp.add_argument("--paths", action="store_true", help="include paths in output")
    sp.set_defaults(func=_cmd_forest)

    sp = sub.add_parser(
        "solve", parents=[common], help="find a near-rainbow Hamilton cycle"
    )
    sp.add_argument("graph")
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--cycle", action="store_true", help="include the cycle")
    sp.add_argument(
        "--any-proper",
        action="store_true",
        help="accept any proper colouring (colour-splitting wrapper)",
    )
    sp.set_defaults(func=_cmd_solve)

    adv = sub.add_parser("adversary", help="bounded-colouring counterexamples")
    advsub = adv.add_subparsers(dest="adversary_command", required=True)
    sp = advsub.add_parser("gen", parents=[common], help="build a counterexample")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument(
        "--preset", choices=("proposition", "corollary", "scaled"), default="scaled"
    )
    sp.add_argument("--c", type=float, default=0.25, help="proposition bound constant")
    sp.add_argument("-m", type=int, default=1)
    sp.add_argument("-t", type=int, default=1)
    sp.add_argument("-q", type=int, default=2)
    sp.add_argument("--ell", type=int, default=4)
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--certificate", required=True)
    sp.set_defaults(func=_cmd_adversary_gen)
    sp = advsub.add_parser("verify", parents=[common], help="verify a certificate")
    sp.add_argument("graph")
    sp.add_argument("certificate")
    sp.set_defaults(func=_cmd_adversary_verify)

    orc = sub.add_parser("oracle", help="exact small-instance references")
    orcsub = orc.add_subparsers(dest="oracle_command", required=True)
    sp = orcsub.add_parser(
        "hamilton", parents=[common], help="max-colour Hamilton cycle by enumeration"
    )
    sp.add_argument("graph")
    sp.add_argument("--budget", type=int, default=12)
    sp.set_defaults(func=_cmd_oracle_hamilton)
    sp = orcsub.add_parser(
        "matching", parents=[common], help="exact maximum rainbow matching"
    )
    sp.add_argument("graph")
    sp.add_argument("--budget", type=int, default=16)
    sp.set_defaults(func=_cmd_oracle_matching)

    sp = sub.add_parser("suite", parents=[common], help="run a batch suite")
    sp.add_argument(
        "name", choices=("pipeline", "adversary", "oracle-equivalence")
    )
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("-n", type=int, default=None)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=_cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, PreconditionError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StageFailure as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
