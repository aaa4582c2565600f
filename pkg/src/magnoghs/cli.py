"""Command line entry point: ``magnoghs <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 steady-state non-convergence.
"""

from __future__ import annotations

import argparse
import io
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import Config, parse_assignment
from .output import gnuplot_script, read_metadata, write
from .params import ConfigError
from .sweep import KINDS, SteadyStateError, make_plan, plan_from_metadata, run_plan

log = logging.getLogger("magnoghs")

EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3

_HELP = {
    "spectrum": "probe absorption Re chi and dispersion Im chi vs effective detuning",
    "ghs": "Goos-Haenchen shift vs incident angle",
    "map": "GHS over two of (theta, G_mb, x)",
    "kappa-sweep": "GHS vs cavity decay rate kappa_a/g_ma",
    "length-sweep": "GHS vs incident angle for several cavity lengths d2",
    "steady-state": "steady state of the driven system (drive mode)",
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="key = value parameter file")
    p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                   help="override one configuration key (repeatable)")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1, metavar="N")
    p.add_argument("--allow-unstable", action="store_true",
                   help="accept G_mb above the stable-regime bound")
    p.add_argument("--emit-gnuplot", action="store_true",
                   help="write PATH.gp next to the CSV output")
    p.add_argument("--figure", metavar="PATH", help="render a PNG/PDF figure of the result")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magnoghs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    for kind in KINDS:
        p = sub.add_parser(kind, parents=[common], help=_HELP[kind])
        p.add_argument("--axis", metavar="NAME=MIN:MAX:N", help="inner axis, or NAME=v1,v2,...")
        p.add_argument("--axis2", metavar="NAME=MIN:MAX:N", help="outer axis ('none' to disable)")
    p = sub.add_parser("replay", parents=[common], help="re-run the plan stored in a result header")
    p.add_argument("source", help="CSV or JSON file written by this tool")
    return parser


def _load_config(args) -> Config:
    cfg = Config.load(args.config, args.set)
    if args.allow_unstable:
        cfg = cfg.set_internal(allow_unstable=True)
    return cfg


def _build_plan(args):
    if args.command == "replay":
        plan = plan_from_metadata(read_metadata(args.source))
        if args.set:
            overrides = dict(parse_assignment(s) for s in args.set)
            plan = replace(plan, config=plan.config.update(overrides))
        return plan
    return make_plan(args.command, _load_config(args), args.axis, args.axis2)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.emit_gnuplot and (args.out is None or args.format != "csv"):
            raise ConfigError("--emit-gnuplot needs --out and CSV format")
        plan = _build_plan(args)
        log.info("running %s with %d rows", plan.kind, plan.size)
        result = run_plan(plan, threads=args.threads)
    except ConfigError as exc:
        print(f"magnoghs: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SteadyStateError as exc:
        print(f"magnoghs: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED

    buf = io.StringIO()
    write(result, buf, args.format)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(buf.getvalue())
    if args.emit_gnuplot:
        script = Path(args.out).with_suffix(".gp")
        script.write_text(gnuplot_script(result, args.out), encoding="utf-8")
    if args.figure:
        from .plotting import render

        render(result, args.figure)

    if plan.kind == "steady-state":
        converged = result.column("converged")
        if not converged.all():
            res = result.column("residual")[converged == 0]
            print(f"magnoghs: steady state did not converge (last residual {res.max():.3g})", file=sys.stderr)
            return EXIT_NONCONVERGED
    return 0
