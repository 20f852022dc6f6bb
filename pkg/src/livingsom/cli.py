"""Command-line entry point: ``livingsom <command> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

import numpy as np

from . import pipeline
from .errors import DataValidationError, NumericalError
from .synthetic import SynthSpec, echp_spec, generate_synthetic

log = logging.getLogger("livingsom")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2


def _number(text):
    try:
        return int(text)
    except ValueError:
        return float(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="livingsom", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="pipeline config JSON")
    common.add_argument("--data", help="household CSV")
    common.add_argument("--codebook", help="codebook JSON (default: built-in 26 items)")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("--topology", help="map topology, e.g. string-10 or grid-8x8")
    common.add_argument("--iterations", type=int, help="SOM training steps")
    common.add_argument("--k", type=int, help="number of super-classes")
    common.add_argument("--rate", type=float, help="target poverty rate in percent")
    common.add_argument("--axes", type=_number, help="MCA axes: count or inertia fraction")

    sub.add_parser("validate", parents=[common], help="check data against the codebook")
    sub.add_parser("mca", parents=[common], help="MCA eigenvalues and coordinates")
    sub.add_parser("map-modalities", parents=[common], help="Kohonen maps of the modalities")
    sub.add_parser("map-households", parents=[common], help="household map and super-classes")
    sub.add_parser("map-scores", parents=[common], help="map of partial scores")
    th = sub.add_parser("threshold", parents=[common], help="score distribution and poverty line")
    th.add_argument("--score-table", help="CSV with score,percent columns, or 'reference'")
    sub.add_parser("all", parents=[common], help="run every analysis")

    sy = sub.add_parser("synth", help="write a synthetic household CSV")
    sy.add_argument("--output", required=True)
    sy.add_argument("--spec", help="SynthSpec JSON (default: ECHP-like preset)")
    sy.add_argument("--n", type=int, help="number of households for the preset")
    sy.add_argument("--seed", type=int, default=0)
    return p


def make_config(args) -> pipeline.PipelineConfig:
    cfg = pipeline.PipelineConfig.from_json(args.config) if args.config else pipeline.PipelineConfig()
    over = {k: v for k, v in (("data", args.data), ("codebook", args.codebook),
                              ("seed", args.seed), ("out", args.out), ("k", args.k),
                              ("axes", args.axes)) if v is not None}
    if args.rate is not None:
        over["poverty_rate"] = args.rate
    if getattr(args, "score_table", None):
        over["score_table"] = args.score_table
    if args.iterations is not None:
        over["som"] = dict(cfg.som, iterations=args.iterations)
    if args.topology:
        key = {"map-modalities": "modality_topologies", "map-scores": "score_topology"}.get(
            args.command, "household_topology")
        over[key] = [args.topology] if key == "modality_topologies" else args.topology
    return replace(cfg, **over)


def _print_validation(report) -> None:
    print(f"records: {report['records']}")
    print(f"dropped: {report['dropped']}")
    print(f"items: {report['items']} ({2 * report['items']} modalities)")
    print(f"{'modality':<10}{'percent':>10}{'reference':>11}")
    for row in report["modalities"]:
        refv = "" if row["reference"] is None else f"{row['reference']:.1f}"
        print(f"{row['modality']:<10}{row['percent']:>10.1f}{refv:>11}")


def run(args) -> int:
    if args.command == "synth":
        spec = SynthSpec.from_json(args.spec) if args.spec else echp_spec()
        if args.n is not None:
            spec = replace(spec, n=args.n)
        generate_synthetic(spec, args.seed).to_csv(args.output)
        print(f"wrote {spec.n} households to {args.output}")
        return EXIT_OK
    cfg = make_config(args)
    if args.command == "validate":
        _print_validation(pipeline.cmd_validate(cfg))
        return EXIT_OK
    commands = {
        "mca": [pipeline.cmd_mca],
        "map-modalities": [pipeline.cmd_map_modalities],
        "map-households": [pipeline.cmd_map_households],
        "map-scores": [pipeline.cmd_map_scores],
        "threshold": [pipeline.cmd_threshold],
        "all": [pipeline.cmd_mca, pipeline.cmd_map_modalities, pipeline.cmd_map_households,
                pipeline.cmd_map_scores, pipeline.cmd_threshold],
    }[args.command]
    for cmd in commands:
        path = cmd(cfg)
        print(f"wrote {path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except DataValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
