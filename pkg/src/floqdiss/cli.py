"""Command-line interface.

    floqdiss solve|rates|steady|dissipation|sweep --config run.json [options]
    floqdiss figure fig1|fig2|fig3|fig4 [--config run.json] [options]

Exit status: 0 on success, 1 on configuration/validation errors, 2 on
numerical failures.
"""

from __future__ import annotations

import argparse
import sys

from .config import apply_overrides, build_config, load_raw
from .exceptions import FloqdissError, NonHermitianInput, ParseError, ValidationError
from .pipeline import run

# subcommand -> configuration task
_TASKS = {
    "solve": "quasienergies",
    "rates": "rates",
    "steady": "steady",
    "dissipation": "dissipation",
    "sweep": "sweep",
    "figure": "figure",
}

_FIGURE_DEFAULT_RAW = {
    "system": {
        "type": "two_level",
        "params": {"omega0": 1.0, "omega": 1.5, "muF": 1.0, "gamma": 0.05, "J": 1.0},
    },
    "bath": {"beta": 1.0},
    "task": "figure",
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default; here 2 means numerical failure
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(sub):
    sub.add_argument("--config", metavar="PATH", help="JSON configuration file")
    sub.add_argument("--engine", choices=("numeric", "analytic"), help="override the engine")
    sub.add_argument("--out", metavar="PATH", help="output file path")
    sub.add_argument(
        "--set",
        metavar="KEY=VALUE",
        action="append",
        default=[],
        dest="overrides",
        help="override a configuration entry (dotted keys, repeatable)",
    )


def build_parser():
    parser = _Parser(prog="floqdiss", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("solve", "quasienergies and Floquet-state data"),
        ("rates", "golden-rule partial rate table"),
        ("steady", "quasistationary occupation distribution"),
        ("dissipation", "steady-state energy dissipation rate"),
        ("sweep", "dissipation over a parameter grid"),
        ("figure", "report figure data (CSV + PNG)"),
    ):
        sub = subs.add_parser(name, help=text)
        if name == "figure":
            sub.add_argument("which", choices=("fig1", "fig2", "fig3", "fig4"), help="figure to emit")
            sub.add_argument("--no-plot", action="store_true", help="write the CSV only, skip the PNG")
            sub.add_argument("--points", type=int, help="number of grid points per curve")
        _add_common(sub)
    return parser


def _build_run_config(args):
    if args.config is not None:
        raw = load_raw(args.config)
    elif args.command == "figure":
        raw = dict(_FIGURE_DEFAULT_RAW)
    else:
        raise ValidationError(f"subcommand '{args.command}' requires --config")
    raw = apply_overrides(raw, args.overrides)
    raw["task"] = _TASKS[args.command]
    if args.command == "figure":
        raw["figure"] = args.which
        if args.points is not None:
            raw["figure_points"] = args.points
    else:
        raw.pop("figure", None)
    if args.engine:
        raw["engine"] = args.engine
    if args.out:
        raw["output"] = args.out
    config = build_config(raw)
    if args.command == "figure" and args.no_plot:
        config.render_figures = False
    return config


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = _build_run_config(args)
        run(config)
    except (ParseError, ValidationError, NonHermitianInput) as exc:
        print(f"floqdiss: error: {exc}", file=sys.stderr)
        return 1
    except FloqdissError as exc:
        print(f"floqdiss: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
