"""Command-line entry point.

    qwcycle run CONFIG      one experiment -> distributions.csv, metrics.csv
    qwcycle sweep CONFIG    grid over sweep.* axes -> sweep.csv
    qwcycle preset NAME     shipped figure configs (fig1..fig4)
    qwcycle verify          quick oracle and invariant checks

Exit codes: 0 ok, 1 verify failure, 2 validation error,
3 numerical-integrity error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import _kernels
from .config import build_config, load, parse_lines, split_sweep
from .errors import BoundaryError, ChannelIntegrityError, CapacityError, NumericalIntegrityError, ValidationError
from .experiment import PRESETS, run_experiment, run_preset, run_sweep

log = logging.getLogger("qwcycle")

EXIT_OK, EXIT_VERIFY, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


def _overrides(args) -> dict:
    out = {}
    if args.record_every is not None:
        out["record_every"] = args.record_every
    if args.coherence_bins is not None:
        out["coherence.M"] = str(args.coherence_bins)
    return out


def _cmd_run(args) -> int:
    raw = parse_lines(load(args.config))
    raw.update(_overrides(args))
    sweep_keys = [k for k in raw if k.startswith("sweep.")]
    if sweep_keys:
        raise ValidationError("sweep axes need the sweep subcommand", sweep_keys[0])
    cfg = build_config(raw)
    for path in run_experiment(cfg, args.output_dir):
        print(path)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    raw = parse_lines(load(args.config))
    raw.update(_overrides(args))
    spec = split_sweep(raw)
    for path in run_sweep(spec, args.output_dir, jobs=args.jobs, cap=args.max_points):
        print(path)
    return EXIT_OK


def _cmd_preset(args) -> int:
    for path in run_preset(args.name, args.output_dir, jobs=args.jobs, overrides=_overrides(args)):
        print(path)
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_all

    ok = True
    for name, passed, detail in run_all():
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", default="qwcycle-out", help="where CSV files go")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes for sweeps")
    common.add_argument("--record-every", default=None, help="stride: N steps or 'X turns'")
    common.add_argument("--coherence-bins", type=int, default=None, help="number of coherence bins M")
    common.add_argument("--backend", choices=_kernels.BACKENDS, default=None,
                        help=f"kernel backend (default from ${_kernels.ENV_FLAG})")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="qwcycle", description="Coined quantum walks on lines and cycles.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", parents=[common], help="run one config")
    p.add_argument("config")
    p.set_defaults(func=_cmd_run)
    p = sub.add_parser("sweep", parents=[common], help="run a parameter sweep")
    p.add_argument("config")
    p.add_argument("--max-points", type=int, default=4096)
    p.set_defaults(func=_cmd_sweep)
    p = sub.add_parser("preset", parents=[common], help="run a shipped figure preset")
    p.add_argument("name", choices=PRESETS)
    p.set_defaults(func=_cmd_preset)
    p = sub.add_parser("verify", parents=[common], help="oracle and invariant self-checks")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.backend:
        _kernels.set_backend(args.backend)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except (ValidationError, CapacityError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NumericalIntegrityError, ChannelIntegrityError, BoundaryError) as exc:
        print(f"numerical-integrity error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
