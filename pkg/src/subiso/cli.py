"""Command-line front end.

Subcommands: ``gen random``/``gen mesh`` write instance files, ``solve``
runs one model on a pattern/target pair and prints a single result line,
``bench`` runs a manifest of classes into a CSV, ``oracle`` brute-forces a
small instance or refuses.

Exit codes: 0 solved/ok, 2 timeout or oracle refusal, 1 usage or format
errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import mode_from_name, model_from_name, run_bench
from .generators import MeshParams, RandomParams, gen_mesh, gen_random
from .graphio import GraphFormatError, read_graph, write_graph
from .model import SipInstance
from .oracle import OracleLimitError, OracleLimits, brute_force_count
from .search import ModelConfig, SolveResult, SolveStatus, solve


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subiso",
        description="Subgraph isomorphism solving with dynamic decomposition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate benchmark instances")
    gen_sub = gen.add_subparsers(dest="family", required=True)

    g_random = gen_sub.add_parser("random", help="randomly connected digraphs")
    g_random.add_argument("--n", type=int, required=True)
    g_random.add_argument("--eta", type=float, required=True)
    g_random.add_argument("--alpha", type=float, required=True)
    g_random.add_argument("--seed", type=int, default=0)
    g_random.add_argument("--mode", choices=["embedded", "independent"], default="embedded")
    g_random.add_argument("--out-dir", required=True)

    g_mesh = gen_sub.add_parser("mesh", help="irregular mesh digraphs")
    g_mesh.add_argument("--side", type=int, required=True)
    g_mesh.add_argument("--dims", type=int, required=True)
    g_mesh.add_argument("--rho", type=float, required=True)
    g_mesh.add_argument("--alpha", type=float, required=True)
    g_mesh.add_argument("--seed", type=int, default=0)
    g_mesh.add_argument("--mode", choices=["embedded", "independent"], default="embedded")
    g_mesh.add_argument("--out-dir", required=True)

    s = sub.add_parser("solve", help="run one solver model on an instance")
    s.add_argument("--pattern", required=True)
    s.add_argument("--target", required=True)
    s.add_argument(
        "--model",
        choices=["cpfc", "cpac", "dec", "dec-h1", "dec-h2"],
        default="dec-h1",
    )
    s.add_argument("--mode", choices=["first", "count", "enum"], default="count")
    s.add_argument("--time-limit", type=float, default=None)
    s.add_argument("--switch-frac", type=float, default=0.30)
    s.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("bench", help="run a benchmark suite manifest")
    b.add_argument("--suite", required=True, help="TOML manifest of instance classes")
    b.add_argument("--out", required=True, help="CSV output path")
    b.add_argument("--log", default=None, help="JSON-lines log path (default: CSV with .jsonl)")
    b.add_argument("--verbose", action="store_true")

    o = sub.add_parser("oracle", help="brute-force count on a small instance")
    o.add_argument("--pattern", required=True)
    o.add_argument("--target", required=True)
    o.add_argument("--max-pattern", type=int, default=8)
    o.add_argument("--max-target", type=int, default=16)
    o.add_argument("--step-limit", type=int, default=5_000_000)
    return parser


def _format_result(result: SolveResult) -> str:
    s = "-" if result.heuristic_fraction is None else f"{result.heuristic_fraction:.3f}"
    return (
        f"{result.status.value}"
        f" count={result.solution_count}"
        f" time={result.elapsed:.3f}"
        f" nodes={result.search_nodes}"
        f" D={int(result.used_decomposition)}"
        f" #D={result.decomposition_events}"
        f" S={s}"
    )


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.family == "random":
        params = RandomParams(
            n=args.n, eta=args.eta, alpha=args.alpha, seed=args.seed, mode=args.mode
        )
        inst = gen_random(params)
        meta = {"family": "random", "n": args.n, "eta": args.eta}
    else:
        params = MeshParams(
            side=args.side,
            dims=args.dims,
            rho=args.rho,
            alpha=args.alpha,
            seed=args.seed,
            mode=args.mode,
        )
        inst = gen_mesh(params)
        meta = {"family": "mesh", "side": args.side, "dims": args.dims, "rho": args.rho}
    meta.update(
        {
            "alpha": args.alpha,
            "seed": args.seed,
            "mode": args.mode,
            "embedding": list(inst.embedding) if inst.embedding else None,
        }
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_graph(inst.pattern, out_dir / "pattern.graph")
    write_graph(inst.target, out_dir / "target.graph")
    (out_dir / "instance.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"wrote {out_dir}/pattern.graph, target.graph, instance.json")
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    inst = SipInstance(read_graph(args.pattern), read_graph(args.target))
    cfg = ModelConfig(
        model=model_from_name(args.model),
        search_mode=mode_from_name(args.mode),
        time_limit=args.time_limit,
        switch_fraction=args.switch_frac,
        rng_seed=args.seed,
    )
    result = solve(inst, cfg)
    print(_format_result(result))
    if result.solutions is not None:
        for sol in result.solutions:
            print("sol " + " ".join(f"{i}->{t}" for i, t in enumerate(sol)))
    return 0 if result.status is SolveStatus.SOLVED else 2


def _cmd_bench(args: argparse.Namespace) -> int:
    records = run_bench(
        args.suite,
        args.out,
        args.log,
        echo=sys.stdout if args.verbose else None,
    )
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    inst = SipInstance(read_graph(args.pattern), read_graph(args.target))
    limits = OracleLimits(
        max_pattern_nodes=args.max_pattern,
        max_target_nodes=args.max_target,
        hard_step_limit=args.step_limit,
    )
    try:
        count = brute_force_count(inst, limits)
    except OracleLimitError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    print(f"count={count}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 means timeout here, so remap.
        return 0 if exc.code == 0 else 1
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
    except (GraphFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
