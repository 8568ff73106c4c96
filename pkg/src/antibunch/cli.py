"""Command-line front end.

Subcommands map one-to-one onto tasks:

    sweep      g2(0) versus a swept parameter (default: detuning)
    tau        g2(tau) series at a fixed working point
    contour    log10 g2(0) over a (delta, u) grid
    thermal    g2(0) versus the thermal phonon number
    dephasing  g2(0) versus the pure-dephasing rate
    optimal    table of optimal (delta, u) pairs versus coupling

Each writes a CSV, a .meta.json sidecar, and (unless --no-plot) a PNG
figure next to the CSV.  Exit codes: 0 success, 1 configuration error,
2 solver/task error.
"""

import argparse
import dataclasses
import sys
import time

from .config import load_config
from .errors import AntibunchError, ConfigError
from .tasks import metadata_path, run_task, write_csv, write_metadata

SUBCOMMAND_TASKS = {
    "sweep": "delta-sweep",
    "tau": "tau-series",
    "contour": "contour",
    "thermal": "thermal-sweep",
    "dephasing": "dephasing-sweep",
    "optimal": "optimal-table",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="antibunch",
        description="Steady-state and two-time photon statistics of a "
                    "driven three-mode Kerr/optomechanical system.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, task in SUBCOMMAND_TASKS.items():
        sub = subparsers.add_parser(name, help=f"run the {task} task")
        sub.add_argument("--config", default=None,
                         help="flat key=value config file")
        sub.add_argument("--out", required=True,
                         help="output CSV path")
        sub.add_argument("--override", action="append", default=[],
                         metavar="KEY=VALUE",
                         help="config override, repeatable")
        sub.add_argument("--workers", type=int, default=1,
                         help="parallel grid workers (default 1)")
        sub.add_argument("--plot", action=argparse.BooleanOptionalAction,
                         default=True,
                         help="render the figure next to the CSV")
        sub.set_defaults(task=task)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, overrides=args.override)
        config = dataclasses.replace(config, task=args.task, output_path=args.out)
    except ConfigError as exc:
        print(f"antibunch: config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"antibunch: cannot read config: {exc}", file=sys.stderr)
        return 1

    started = time.perf_counter()
    try:
        result = run_task(config, workers=max(1, args.workers))
    except ConfigError as exc:
        print(f"antibunch: config error: {exc}", file=sys.stderr)
        return 1
    except AntibunchError as exc:
        print(f"antibunch: solver error: {exc}", file=sys.stderr)
        return 2
    wall_time = time.perf_counter() - started

    try:
        write_csv(result, args.out)
        write_metadata(result, config, args.out, wall_time, max(1, args.workers))
        outputs = [args.out, str(metadata_path(args.out))]
        if args.plot:
            from .plots import figure_path, render

            render(result, figure_path(args.out))
            outputs.append(str(figure_path(args.out)))
    except OSError as exc:
        print(f"antibunch: cannot write output: {exc}", file=sys.stderr)
        return 2

    written = int(result.ok.sum())
    total = int(result.rows.shape[0])
    note = "" if written == total else f" ({total - written} point(s) failed)"
    print(f"{result.task}: wrote {written}/{total} rows{note} -> "
          f"{', '.join(outputs)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
