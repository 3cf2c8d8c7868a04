"""Command line front end.

    embed run    --preset cantor --out results/
    embed verify --preset circle --suite stage2
    embed export --space cantor --depth 3 --r 1/9 --out dump/

Exit status is nonzero whenever a validator or invariant check fails.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from qtrees.pipeline import StageError, export_artifacts, run_pipeline
from qtrees.presets import PRESETS, config_for
from qtrees.reporting import json_text
from qtrees.verify import SUITES, run_suite


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="pinned configuration known to validate")
    p.add_argument("--space", dest="space_kind",
                   choices=["cantor", "circle", "grid"],
                   help="generated test space")
    p.add_argument("--space-file", help="distance matrix file (see README)")
    p.add_argument("--depth", "--n", dest="space_param", type=int,
                   help="generator size (cantor depth, circle N, grid n)")
    p.add_argument("--r", dest="r", type=Fraction,
                   help="scale parameter as p/q, at most 1/6")
    p.add_argument("--max-level", dest="max_level", type=int,
                   help="truncation level (default: full separation)")
    p.add_argument("--kappa", type=int,
                   help="page capacity (default 15*colors+1)")
    p.add_argument("--colors", dest="n_colors", type=int,
                   help="covering colors")
    p.add_argument("--seed", type=int, help="seed for sampled checks")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker cap for pairwise suites (1 = sequential)")
    p.add_argument("--out", dest="out_dir", help="artifact directory")
    p.add_argument("--research-kappa", action="store_true",
                   help="allow page capacities below the proven bound")


def _config_from_args(args) -> "PipelineConfig":
    overrides = {
        k: getattr(args, k)
        for k in ("space_kind", "space_param", "space_file", "r", "max_level",
                  "kappa", "n_colors", "seed", "jobs", "out_dir")
        if getattr(args, k, None) is not None
    }
    if args.research_kappa:
        overrides["research_kappa"] = True
    if args.jobs is not None and args.jobs < 1:
        raise SystemExit("--jobs must be at least 1")
    return config_for(args.preset, **overrides)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="embed",
        description="build and verify tree embeddings of finite metric spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the full pipeline and report")
    _add_config_flags(p_run)

    p_verify = sub.add_parser("verify", help="run a named invariant suite")
    p_verify.add_argument("suite", choices=SUITES)
    _add_config_flags(p_verify)

    p_export = sub.add_parser("export", help="write artifacts without checks")
    _add_config_flags(p_export)

    args = parser.parse_args(argv)
    config = _config_from_args(args)

    try:
        if args.command == "run":
            result = run_pipeline(config)
            print(json_text(result.report), end="")
            return 0 if result.ok else 1
        if args.command == "verify":
            report = run_suite(config, args.suite)
            print(json_text(report), end="")
            return 0 if report["ok"] else 1
        # export
        result = run_pipeline(config, write_artifacts=False)
        out = config.out_dir or "."
        export_artifacts(result, out)
        print(f"artifacts written to {out}")
        return 0 if result.ok else 1
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
