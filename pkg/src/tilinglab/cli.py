"""Command-line surface: gen, params, factor, absorb, verify, sweep.

Exit codes: 0 success, 1 solver or verification failure, 2 usage error.
The default seed comes from --seed, falling back to the TILINGLAB_SEED
environment variable, falling back to 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .absorbing import (
    AbsorberConfig,
    StageFailure,
    TemplateBuildError,
    absorb,
    build_absorbing_set,
    make_family_builder,
)
from .factor import find_factor_exact
from .generators import (
    gen_complete_multipartite,
    gen_gamma,
    gen_gnp,
    gen_hs_tripartite,
    gen_lower_bound_construction,
    gen_two_cliques,
)
from .graphs import GraphParseError, emit_graph, parse_graph
from .invariants import param_report
from .pipeline import find_factor_absorbing
from .rng import derive_seed, rng_for
from .serialize import (
    SCHEMA_ABSORBER,
    SCHEMA_STRUCTURE,
    SCHEMA_TILING,
    SCHEMA_WITNESS,
    dump_json,
    load_json,
    parse_pattern_spec,
    pattern_from_obj,
    structure_from_obj,
    structure_to_obj,
    tiling_from_obj,
    tiling_to_obj,
)
from .sweep import ExperimentSpec, rows_to_csv, run_sweep
from .verify import (
    VerificationError,
    verify_absorber,
    verify_structure,
    verify_tiling,
    verify_traversing_witness,
)

USAGE_ERROR = 2
FAILURE = 1
OK = 0


def _default_seed() -> int:
    env = os.environ.get("TILINGLAB_SEED")
    return int(env) if env else 0


def _read_graph(path: str):
    with open(path, "r", encoding="ascii") as fh:
        return parse_graph(fh.read())


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def _check_format(args, native: str) -> int | None:
    """Commands have one native output format; anything else is a usage error."""
    fmt = getattr(args, "format", None)
    if fmt is not None and fmt != native:
        print(f"this command writes {native} output only", file=sys.stderr)
        return USAGE_ERROR
    return None


def cmd_gen(args) -> int:
    bad = _check_format(args, "edgelist")
    if bad is not None:
        return bad
    seed = args.seed
    c = args.construction
    if c == "gnp":
        g = gen_gnp(args.n, args.p, seed)
    elif c == "complete-multipartite":
        g = gen_complete_multipartite([int(s) for s in args.sizes.split(",")])
    elif c == "two-cliques":
        g = gen_two_cliques(args.n)
    elif c == "hs-tripartite":
        g = gen_hs_tripartite(args.n)
    elif c == "gamma":
        rep = gen_gamma(args.ell, args.n, seed)
        g = rep.graph
        print(json.dumps({
            "ell": rep.ell, "n": g.n, "m": g.m,
            "max_degree": rep.max_degree,
            "alpha_ell": rep.alpha_ell, "alpha_exact": rep.alpha_exact,
        }), file=sys.stderr)
    elif c == "lower-bound":
        g = gen_lower_bound_construction(args.r, args.ell, args.n, seed)
    else:
        print(f"unknown construction: {c}", file=sys.stderr)
        return USAGE_ERROR
    _write_text(args.out, emit_graph(g))
    return OK


def cmd_params(args) -> int:
    bad = _check_format(args, "json")
    if bad is not None:
        return bad
    g = _read_graph(args.graph)
    pattern = parse_pattern_spec(args.pattern) if args.pattern else None
    ells = [int(x) for x in args.ell.split(",")] if args.ell else [2]
    report = param_report(
        g, ells=ells, pattern=pattern,
        traversing_s=args.traversing_s,
        traversing_mode=args.traversing_mode,
        trials=args.trials, seed=args.seed,
    )
    text = json.dumps(report.to_flat_dict(), indent=1, sort_keys=True) + "\n"
    _write_text(args.out, text)
    return OK


def cmd_factor(args) -> int:
    bad = _check_format(args, "json")
    if bad is not None:
        return bad
    g = _read_graph(args.graph)
    pattern = parse_pattern_spec(args.pattern)
    if args.solver == "exact":
        res = find_factor_exact(g, pattern, budget=args.budget_nodes)
        if res.found:
            if args.out:
                dump_json(tiling_to_obj(res.tiling), args.out)
            print(f"factor: {len(res.tiling)} copies ({res.nodes} nodes)")
            return OK
        print(f"no factor: {res.status} ({res.nodes} nodes)")
        return FAILURE
    config_kw = json.loads(args.config) if args.config else {}
    config = AbsorberConfig.desk_scale(h=pattern.h, **config_kw)
    report = find_factor_absorbing(
        g, pattern, mode=args.mode, ell=args.ell, config=config,
        seed=args.seed, fallback_cap=args.fallback_cap, budget=args.budget_nodes,
    )
    if args.report:
        dump_json(report.to_obj(include_tiling=False), args.report)
    if report.factor_found:
        if args.out:
            dump_json(tiling_to_obj(report.tiling), args.out)
        print(f"factor: {len(report.tiling)} copies "
              f"(fallback={'yes' if report.fallback_used else 'no'})")
        return OK
    print(f"no factor: stage {report.failure_stage}; "
          f"hypotheses {'held' if report.hypothesis_held else 'violated'}")
    return FAILURE


def cmd_absorb(args) -> int:
    bad = _check_format(args, "json")
    if bad is not None:
        return bad
    g = _read_graph(args.graph)
    pattern = parse_pattern_spec(args.pattern)
    config_kw = json.loads(args.config) if args.config else {}
    config = AbsorberConfig.desk_scale(h=pattern.h, **config_kw)
    builder = make_family_builder(args.builder, g, pattern, config,
                                  seed=derive_seed(args.seed, "families"),
                                  ell=args.ell if args.builder == "clique" else None)
    try:
        structure = build_absorbing_set(g, pattern, config, seed=args.seed,
                                        family_builder=builder)
    except (StageFailure, TemplateBuildError) as exc:
        print(f"build failed: {exc}", file=sys.stderr)
        return FAILURE
    if args.out:
        dump_json(structure_to_obj(structure), args.out)
    print(f"absorbing set: {len(structure.absorbing_set)} vertices, "
          f"m={structure.template.m}, template edges "
          f"{len(structure.edge_absorbers)}")

    aset = structure.absorbing_set
    outside = sorted(set(range(g.n)) - aset)
    sizes = structure.valid_remainder_sizes()
    ok = 0
    for i in range(args.trials):
        rng = rng_for(args.seed, "trial", i)
        size = sizes[rng.randrange(len(sizes))] if sizes else 0
        rem = sorted(rng.sample(outside, size)) if size else []
        try:
            absorb(g, structure, rem)
            ok += 1
        except (StageFailure, ValueError) as exc:
            print(f"trial {i} (|R|={size}): {exc}", file=sys.stderr)
    print(f"absorption trials: {ok}/{args.trials} ok")
    return OK if ok == args.trials else FAILURE


def cmd_verify(args) -> int:
    obj = load_json(args.certificate)
    schema = obj.get("schema")
    try:
        if schema == SCHEMA_TILING:
            g = _read_graph(args.graph)
            tiling = tiling_from_obj(obj)
            verify_tiling(g, tiling, require_factor=args.factor)
        elif schema == SCHEMA_ABSORBER:
            g = _read_graph(args.graph)
            pattern = pattern_from_obj(obj["pattern"])
            verify_absorber(g, pattern, obj["core"], obj["absorber"], obj["t"])
        elif schema == SCHEMA_STRUCTURE:
            g = _read_graph(args.graph)
            structure = structure_from_obj(obj)
            verify_structure(g, structure, seed=args.seed)
        elif schema == SCHEMA_WITNESS:
            g = _read_graph(args.graph)
            pattern = pattern_from_obj(obj["pattern"])
            verify_traversing_witness(g, pattern, obj["s"], obj["parts"])
        else:
            print(f"unknown certificate schema: {schema}", file=sys.stderr)
            return USAGE_ERROR
    except VerificationError as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return FAILURE
    print("valid")
    return OK


def cmd_sweep(args) -> int:
    bad = _check_format(args, "csv")
    if bad is not None:
        return bad
    spec = ExperimentSpec.load(args.spec)
    if args.seed_base is not None:
        spec.seed_base = args.seed_base
    rows = run_sweep(spec, threads=args.threads, timings=args.timings)
    text = rows_to_csv(spec, rows)
    _write_text(args.out, text)
    print(f"{len(rows)} rows", file=sys.stderr)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tilinglab",
        description="graph tiling laboratory: generators, invariants, "
                    "exact factors, absorbers, sweeps",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    seed_default = _default_seed()

    p = sub.add_parser("gen", help="write a generated graph as an edge list")
    p.add_argument("--construction", required=True,
                   choices=["gnp", "complete-multipartite", "two-cliques",
                            "hs-tripartite", "gamma", "lower-bound"])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--sizes", type=str, default="")
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=["json", "csv", "edgelist"], default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("params", help="compute graph parameters as JSON")
    p.add_argument("--graph", required=True)
    p.add_argument("--ell", type=str, default="2")
    p.add_argument("--pattern", type=str, default=None)
    p.add_argument("--traversing-s", type=int, default=None)
    p.add_argument("--traversing-mode", choices=["exhaustive", "sampled"],
                   default="sampled")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=["json", "csv", "edgelist"], default=None)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("factor", help="find a perfect tiling")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--solver", choices=["exact", "absorbing"], default="exact")
    p.add_argument("--mode", choices=["general", "clique"], default="general")
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--config", type=str, default=None,
                   help="JSON object of AbsorberConfig.desk_scale overrides")
    p.add_argument("--budget-nodes", type=int, default=2_000_000)
    p.add_argument("--fallback-cap", type=int, default=30)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--report", type=str, default=None)
    p.add_argument("--format", choices=["json", "csv", "edgelist"], default=None)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("absorb", help="build an absorbing structure and test it")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--builder", choices=["direct", "general", "clique"],
                   default="direct")
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--config", type=str, default=None)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=["json", "csv", "edgelist"], default=None)
    p.set_defaults(func=cmd_absorb)

    p = sub.add_parser("verify", help="check a serialized certificate")
    p.add_argument("--certificate", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--factor", action="store_true",
                   help="require the tiling to cover every vertex")
    p.add_argument("--seed", type=int, default=seed_default)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run an experiment spec, write CSV")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--seed-base", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv", "edgelist"], default=None)
    p.add_argument("--timings", action="store_true",
                   help="record wall-clock millis (breaks byte determinism)")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else OK
    try:
        return args.func(args)
    except GraphParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
