"""Command-line entry points for sweeps, Arnoldi dumps, and statistics helpers."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .arnoldi import arnoldi_iterate, decomposition_to_json
from .chaostats import goe_component_cdf
from .errors import ConfigError, KrylovergError
from .harness import (
    build_point,
    load_config,
    prepare_shared,
    run_sweep,
    write_outputs,
)
from .models import dump_matrix

_SWEEP_COMMANDS = {
    "tau-scan": "tau_scan",
    "rmt-sweep": "rmt_lambda",
    "chain-sweep": "chain_hz",
    "trotter-sweep": "trotter_hz",
}

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3
EXIT_TOTAL_FAILURE = 4


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="sweep config JSON")
    parser.add_argument("--seed", type=int, default=None, help="override master_seed")
    parser.add_argument("--workers", type=int, default=1, help="worker process count")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument(
        "--dump-basis", action="store_true", help="include Krylov basis columns in dumps"
    )
    parser.add_argument(
        "--dump-matrix",
        action="store_true",
        help="write the first built unitary as a binary matrix file",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kryloverg",
        description="Krylov-basis ergodicity of unitary evolutions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in _SWEEP_COMMANDS:
        p = sub.add_parser(name, help=f"run a {name.replace('-', ' ')}")
        _add_common(p)

    p_dump = sub.add_parser("arnoldi-dump", help="dump the decomposition of one grid point")
    _add_common(p_dump)
    p_dump.add_argument("--grid-point", type=int, default=0)
    p_dump.add_argument("--realization", type=int, default=0)

    p_stats = sub.add_parser("stats", help="statistics helpers")
    stats_sub = p_stats.add_subparsers(dest="stats_command", required=True)
    p_cdf = stats_sub.add_parser("goe-cdf", help="orthogonal-ensemble component CDF")
    p_cdf.add_argument("--dim", type=int, required=True)
    p_cdf.add_argument("--x", type=float, required=True)

    return parser


def _load_with_overrides(args) -> "SweepConfig":
    cfg = load_config(args.config)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be a 64-bit unsigned integer")
        cfg = dataclasses.replace(cfg, master_seed=args.seed)
    return cfg


def _run_sweep_command(args, experiment: str) -> int:
    cfg = _load_with_overrides(args)
    if cfg.experiment != experiment:
        raise ConfigError(
            f"config declares experiment {cfg.experiment!r}, command expects {experiment!r}"
        )
    result = run_sweep(cfg, workers=max(1, args.workers), dump_basis=args.dump_basis)
    paths = write_outputs(result, args.out)
    if args.dump_matrix:
        shared = prepare_shared(cfg)
        objs = build_point(cfg, 0, 0, shared)
        stem = cfg.output_path or cfg.experiment
        dump_matrix(objs["unitary"].matrix, Path(args.out) / f"{stem}.unitary.bin")
    for p in paths:
        print(p)
    if all(n == 0 for n in result.n_ok):
        return EXIT_TOTAL_FAILURE
    if result.exclusions:
        return EXIT_PARTIAL
    return EXIT_OK


def _run_arnoldi_dump(args) -> int:
    cfg = _load_with_overrides(args)
    shared = prepare_shared(cfg)
    if not 0 <= args.grid_point < len(cfg.grid):
        raise ConfigError(f"grid point {args.grid_point} outside the grid")
    if not 0 <= args.realization < cfg.n_realizations:
        raise ConfigError(f"realization {args.realization} outside n_realizations")
    objs = build_point(cfg, args.grid_point, args.realization, shared)
    decomp = arnoldi_iterate(objs["unitary"], objs["psi0"])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = cfg.output_path or cfg.experiment
    dump_path = out / f"{stem}.arnoldi.json"
    payload = decomposition_to_json(decomp, include_basis=args.dump_basis)
    payload["grid_value"] = cfg.grid[args.grid_point]
    payload["realization"] = args.realization
    dump_path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(dump_path)
    if args.dump_matrix:
        mat_path = out / f"{stem}.unitary.bin"
        dump_matrix(objs["unitary"].matrix, mat_path)
        print(mat_path)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in _SWEEP_COMMANDS:
            return _run_sweep_command(args, _SWEEP_COMMANDS[args.command])
        if args.command == "arnoldi-dump":
            return _run_arnoldi_dump(args)
        if args.command == "stats" and args.stats_command == "goe-cdf":
            print(f"{goe_component_cdf(args.x, args.dim):.17g}")
            return EXIT_OK
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KrylovergError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOTAL_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
