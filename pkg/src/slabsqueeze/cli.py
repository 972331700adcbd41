"""Command line entry point: ``slabsqueeze run|resonances|validate``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import load_config
from .errors import ParseError, PhysicsError, SlabSqueezeError, ValidationError
from .pipeline import build_response, compute_transfer, emit_csv, emit_plot_script, run_pipeline
from .slab import find_resonances

EXIT_OK, EXIT_INVALID, EXIT_PHYSICS = 0, 2, 3

log = logging.getLogger("slabsqueeze")


def _run(args):
    config = load_config(args.config)
    out = Path(args.output) if args.output else config.output_dir
    table = run_pipeline(config, workers=args.workers)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = emit_csv(table, out / "spectrum.csv")
    print(csv_path)
    if config.emit_plot and not args.no_plot:
        print(emit_plot_script(table, out / "plot_spectrum.py", csv_path.name))
    for line in table.footer:
        print(line)


def _resonances(args):
    config = load_config(args.config)
    response = build_response(config)
    transfer = compute_transfer(response, config.thickness, config.thresholds.lasing_guard,
                                config.workers)
    for energy in find_resonances(transfer):
        print(f"{energy:.12e}")


def _validate(args):
    load_config(args.config)
    print(f"{args.config}: ok")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="slabsqueeze",
        description="Squeezed-vacuum propagation through an absorbing/amplifying slab.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="compute the spectrum table")
    run.add_argument("--config", required=True)
    run.add_argument("--output", help="output directory (overrides [output] directory)")
    run.add_argument("--no-plot", action="store_true", help="skip the plot script")
    run.add_argument("--workers", type=int, default=None)
    run.set_defaults(func=_run)

    res = sub.add_parser("resonances", help="list transmission maxima (eV)")
    res.add_argument("--config", required=True)
    res.set_defaults(func=_resonances)

    val = sub.add_parser("validate", help="parse and validate a config")
    val.add_argument("--config", required=True)
    val.set_defaults(func=_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PhysicsError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except SlabSqueezeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
