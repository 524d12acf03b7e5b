"""Command-line entry point: ``predval {simulate,sweep,classify,pool}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import errors
from .config import FORMATS, RunConfig, from_dict, parse_config
from .correlation import DeptRecord, pool_departments
from .pooling import SimDesign, reproduce_bias_tables, validity_sweep
from .report import PoolResult, emit_table
from .utility import table5b

# Most specific classes first; lookup walks this list in order.
EXIT_CODES = [
    (errors.ParseError, 3),
    (errors.ValidationError, 4),
    (errors.NotPositiveSemidefinite, 5),
    (errors.SingularSubsample, 7),
    (errors.SingularMatrix, 6),
    (errors.DegenerateColumn, 8),
    (errors.DegenerateRate, 9),
    (errors.ZeroBaseRate, 10),
    (errors.EmptyInput, 11),
    (errors.SizeMismatch, 12),
    (errors.LengthMismatch, 13),
    (errors.PredvalError, 14),
    (OSError, 15),
]


def exit_code(exc: BaseException) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return 1


def execute(config: RunConfig, workers: int = 1):
    """Run the computation described by ``config`` and return its result object."""
    if config.command == "simulate":
        crit = tuple(c - 1 for c in config.criteria)
        designs = [SimDesign(config.sigma, nss, sss, config.replications, config.seed, crit)
                   for nss, sss in config.cells]
        return reproduce_bias_tables(designs, workers=workers)
    if config.command == "sweep":
        return validity_sweep(config.validities, config.r12, config.cells,
                              config.replications, config.seed, workers=workers)
    if config.command == "classify":
        return table5b(config.validity, config.base_rate, config.quota)
    depts = tuple(DeptRecord(n, r) for n, r in config.departments)
    return PoolResult(depts, pool_departments(depts))


def run(config: RunConfig, stdout=None, workers: int = 1) -> int:
    """Execute ``config``, write the report, and return a process exit status.

    ``workers`` only changes how cells are scheduled, never the output.
    """
    stdout = stdout if stdout is not None else sys.stdout.buffer
    try:
        payload = emit_table(execute(config, workers), config.format, config)
        if config.out:
            Path(config.out).write_bytes(payload)
        else:
            stdout.write(payload)
            stdout.flush()
    except (errors.PredvalError, OSError) as exc:
        return _fail(exc)
    return 0


def _fail(exc: BaseException) -> int:
    print(f"predval: error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return exit_code(exc)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON config file")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--out", help="output file (default: standard output)")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--replications", type=int)
    sim.add_argument("--workers", type=int, default=1,
                     help="threads used to run cells; does not affect results")
    sim.add_argument("--cell", dest="cells", type=int, nargs=2, action="append",
                     metavar=("NSS", "SSS"), help="sub-sample count and size; repeatable")

    parser = argparse.ArgumentParser(
        prog="predval",
        description="Pooled sub-sample bias simulations and classification-rate utility tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common, sim], help="bias table for one population matrix")
    sw = sub.add_parser("sweep", parents=[common, sim], help="bias across criterion validities")
    sw.add_argument("--r12", type=float)
    cl = sub.add_parser("classify", parents=[common], help="fourfold tables, gains and hit rates")
    cl.add_argument("--validity", type=float, nargs="+")
    cl.add_argument("--base-rate", dest="base_rate", type=float, nargs="+")
    cl.add_argument("--quota", type=float, nargs="+")
    po = sub.add_parser("pool", parents=[common], help="size-weighted pooling of reported R's")
    po.add_argument("--dept", dest="departments", nargs=2, action="append",
                    metavar=("N", "R"), help="department size and correlation; repeatable")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.config is not None:
        base = parse_config(args.config.read_text())
        if base.command != args.command:
            raise errors.ValidationError(
                f"command: config file is for {base.command!r}, not {args.command!r}")
        data = base.to_dict()
    else:
        data = {"command": args.command}
    skip = ("config", "command", "workers")
    overrides = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if "departments" in overrides:
        try:
            overrides["departments"] = [[int(n), float(r)] for n, r in overrides["departments"]]
        except ValueError as exc:
            raise errors.ValidationError(f"departments: {exc}") from exc
    data.update(overrides)
    return from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except (errors.PredvalError, OSError) as exc:
        return _fail(exc)
    workers = getattr(args, "workers", 1)
    if workers < 1:
        return _fail(errors.ValidationError(f"workers: must be >= 1, got {workers}"))
    return run(config, workers=workers)


if __name__ == "__main__":
    sys.exit(main())
