"""Command line driver: ``kkw <experiment> [--config FILE] [overrides]``.

The subcommand names the experiment; --config points at a flat
``key = value`` file; the remaining flags override individual fields.
Exits 0 on success, nonzero with a one-line diagnostic on any failure.
"""

import argparse
import sys
from pathlib import Path

from kacwalk import experiments

__all__ = ["build_parser", "main", "run"]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kkw",
        description="Seeded experiments around pairwise row-orthogonalization "
                    "of linear systems.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True,
                                metavar="experiment")
    for name in sorted(experiments.EXPERIMENTS):
        doc = (experiments.EXPERIMENTS[name].__doc__ or "").strip()
        summary = doc.splitlines()[0] if doc else None
        sp = sub.add_parser(name, help=summary, description=doc,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.add_argument("--config", type=Path, default=None,
                        help="flat key = value config file")
        sp.add_argument("--seed", type=int, default=None,
                        help="base seed (trial t uses seed + t)")
        sp.add_argument("--steps", type=int, default=None,
                        help="walk steps per trial")
        sp.add_argument("--m", type=int, default=None, help="row count")
        sp.add_argument("--n", type=int, default=None, help="column count")
        sp.add_argument("--trials", type=int, default=None,
                        help="number of seeded trials")
        sp.add_argument("--snapshot-every", type=int, default=None,
                        help="spectrum/trace sampling stride")
        sp.add_argument("--out", type=str, default=None, dest="out",
                        help="output directory (default: current directory)")
        sp.add_argument("-x", "--extra", action="append", default=[],
                        metavar="KEY=VALUE",
                        help="experiment-specific option (repeatable)")
    return parser


def resolve_config(args):
    """Merge defaults, the optional config file, and CLI overrides."""
    if args.config is not None:
        cfg = experiments.read_config(args.config)
        if cfg.experiment != args.experiment:
            raise ValueError(
                f"config file is for {cfg.experiment!r}, "
                f"but the command line says {args.experiment!r}"
            )
    else:
        cfg = experiments.default_config(args.experiment)
    overrides = {
        "seed": args.seed,
        "steps": args.steps,
        "m": args.m,
        "n": args.n,
        "trials": args.trials,
        "snapshot_every": args.snapshot_every,
        "output_dir": args.out,
    }
    extra = dict(cfg.extra)
    for item in args.extra:
        if "=" not in item:
            raise ValueError(f"--extra expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        extra[key.strip()] = value.strip()
    fields = {
        name: getattr(cfg, name)
        for name in ("experiment", "m", "n", "seed", "steps",
                     "snapshot_every", "output_dir", "trials")
    }
    for name, value in overrides.items():
        if value is not None:
            fields[name] = value
    return experiments.ExperimentConfig(extra=extra, **fields)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        files = experiments.run_experiment(cfg)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"kkw: error: {exc}", file=sys.stderr)
        return 1
    for path in files:
        print(path)
    return 0


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
