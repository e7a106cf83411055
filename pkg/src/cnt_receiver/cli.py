"""``cnt-receiver`` command line.

Exit codes: 0 success, 1 invalid configuration, 2 runtime or numerical
failure (including a failed ``verify``), 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .model import ParameterError
from .scenario import (
    ConfigError,
    ScenarioConfig,
    Table,
    config_comment,
    dump_config,
    load_config,
    run_ber,
    run_single,
    run_sweep,
    trajectory_table,
)

log = logging.getLogger("cnt_receiver")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_IO = 0, 1, 2, 3


class _IOFailure(Exception):
    pass


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}") from exc


def _manifest(out: str | None, command: str, cfg: ScenarioConfig) -> None:
    if out is None or out == "-":
        return
    text = f"# cnt-receiver {command}\n# output: {out}\n# seed: {cfg.seed}\n\n" + dump_config(cfg)
    _write(out + ".manifest.txt", text)


def _resolve_config(args) -> ScenarioConfig:
    if args.config is not None:
        try:
            cfg = load_config(args.config)
        except OSError as exc:
            raise _IOFailure(f"cannot read {args.config}: {exc}") from exc
    else:
        cfg = ScenarioConfig()
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    return cfg


def _emit(args, command: str, cfg: ScenarioConfig, table: Table) -> None:
    _write(args.out, table.to_csv(config_comment(command, cfg)))
    _manifest(args.out, command, cfg)


def cmd_single(args) -> int:
    cfg = _resolve_config(args)
    trajs = [] if args.trajectory else None
    table = run_single(cfg, trajs)
    _emit(args, "single", cfg, table)
    if trajs:
        _write(args.trajectory, trajectory_table(trajs[0]).to_csv(config_comment("single/trajectory", cfg)))
    return EXIT_OK


def cmd_ber(args) -> int:
    cfg = _resolve_config(args)
    _emit(args, "ber", cfg, run_ber(cfg))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _resolve_config(args)
    if args.axis is not None:
        cfg = dataclasses.replace(cfg, sweep_axis=args.axis)
    _emit(args, "sweep", cfg, run_sweep(cfg))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verification import run_all

    results = run_all()
    table = Table(["criterion", "name", "passed", "seconds", "detail"])
    for r in results:
        print(r.line(), file=sys.stderr)
        table.rows.append([r.number, r.name, r.passed, round(r.seconds, 3), r.detail])
    cfg = _resolve_config(args)
    _emit(args, "verify", cfg, table)
    return EXIT_OK if all(r.passed for r in results) else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnt-receiver", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI scenario file")
        p.add_argument("--seed", type=int, help="override noise.seed")
        p.add_argument("--out", help="CSV output path (default stdout)")
        return p

    p = common(sub.add_parser("single", help="one noiseless report plus one noisy symbol of each kind"))
    p.add_argument("--trajectory", help="also write the PLUS-symbol trajectory (t, x, v) here")
    p.set_defaults(func=cmd_single)
    common(sub.add_parser("ber", help="Monte Carlo bit error rate over a noise sweep")).set_defaults(func=cmd_ber)
    p = common(sub.add_parser("sweep", help="distance (or BER) along one axis"))
    p.add_argument("--axis", help="override run.sweep_axis")
    p.set_defaults(func=cmd_sweep)
    common(sub.add_parser("verify", help="run the acceptance checks")).set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ParameterError) as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_CONFIG
    except _IOFailure as exc:
        log.error("%s", exc)
        return EXIT_IO
    except (ValueError, ArithmeticError, AssertionError) as exc:
        log.error("run failed: %s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
