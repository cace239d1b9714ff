"""Command-line entry point: one subcommand per experiment.

Exit status is 0 when every report passes its tolerance, 1 when some gap
is too large and 2 when the run fails or the config is invalid.
"""

import argparse
import sys
from dataclasses import replace

from .errors import RatioLabError
from .harness import EXPERIMENTS, default_config, load_config, run_experiment, write_reports


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ratiolab",
        description="Compare L-function averages with their conjectured main terms.")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} comparison")
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--prime-cutoff", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--tolerance", type=float)
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"))
    return parser


def _configure(args):
    cfg = default_config(args.experiment)
    if args.config:
        cfg = load_config(args.config, cfg)
        if cfg.experiment != args.experiment:
            raise RatioLabError(
                f"config is for {cfg.experiment!r}, not {args.experiment!r}")
    kw = {}
    if args.seed is not None:
        kw["seed"] = args.seed
    if args.samples is not None:
        kw["samples"] = args.samples
    if args.tolerance is not None:
        kw["tolerance"] = args.tolerance
    if args.out is not None:
        kw["output_path"] = args.out
    if args.format is not None:
        kw["output_format"] = args.format
    if args.prime_cutoff is not None:
        kw["euler"] = replace(cfg.euler, prime_cutoff=args.prime_cutoff)
    return replace(cfg, **kw)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _configure(args)
        reports = run_experiment(cfg)
    except (RatioLabError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = write_reports(reports, cfg.output_format, cfg.output_path)
    if not cfg.output_path:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
