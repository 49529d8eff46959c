"""Command-line entry point.

Commands: gen-data, pretrain, distill, eval-dynamics, analogies, gen-skills,
report, pipeline, inspect. Exit codes: 0 success, 2 config error, 3 missing
dependency, 4 numerical failure.
"""

import argparse
import sys

from ..errors import (
    ConfigError,
    CorpusFormatError,
    InputError,
    MissingArtifactError,
    NumericalError,
)
from .config import PRESETS, load_config
from .stages import STAGE_FNS, STAGE_ORDER, inspect_artifact, run_pipeline

EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_NUMERICAL = 4


def _add_run_args(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="config file (key = value lines)")
    p.add_argument("--seed", type=int, metavar="N", help="global run seed")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument(
        "--preset", choices=PRESETS, default="desk", help="configuration preset"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqskill",
        description="Event-representation learning pipeline on synthetic paired demonstrations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for stage in STAGE_ORDER:
        p = sub.add_parser(stage, help=f"run the {stage} stage")
        _add_run_args(p)
    p = sub.add_parser("pipeline", help="run all stages in order")
    _add_run_args(p)
    p.add_argument(
        "--skip",
        action="append",
        default=[],
        metavar="STAGE",
        help="skip a stage (repeatable); later stages must find its artifacts",
    )
    p = sub.add_parser("inspect", help="summarize a checkpoint or corpus file")
    p.add_argument("path")
    p.add_argument(
        "--with-labels",
        action="store_true",
        help="also show sidecar motif labels (corpora only)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        import torch

        torch.set_num_threads(1)  # keeps runs bitwise reproducible
        if args.command == "inspect":
            print(inspect_artifact(args.path, with_labels=args.with_labels))
            return 0
        cfg = load_config(
            path=args.config, preset=args.preset, seed=args.seed, out=args.out
        )
        if args.command == "pipeline":
            executed = run_pipeline(cfg, skip=tuple(args.skip))
            print(f"pipeline done; stages executed: {executed or 'none (all current)'}")
            return 0
        STAGE_FNS[args.command](cfg)
        print(f"stage {args.command} done; outputs under {cfg.out}")
        return 0
    except (ConfigError, InputError, CorpusFormatError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MissingArtifactError as exc:
        print(f"missing dependency: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except NumericalError as exc:
        print(f"numerical failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
