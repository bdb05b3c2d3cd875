"""Command line entry point: ``run``, ``sweep`` and ``check``.

Configuration precedence is flags > ``--config`` file > built-in defaults.
Exit codes: 0 success, 1 configuration error, 2 numerical-domain error,
3 boundary contamination, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

from .errors import ConfigurationError, SimulationError
from .experiment import SWEEP_AXES, ExperimentConfig, check_adiabaticity, coerce_fields, flatten_config
from .experiment import linspace_values, run_protocol, run_sweep
from .report import emit_report, load_config_dict

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_BOUNDARY, EXIT_IO = 0, 1, 2, 3, 4

# (flag, field, type, help)
CONFIG_FLAGS = (
    ("--branch", "branch", str, "'+' (antisymmetric target) or '-' (symmetric target)"),
    ("--detuning-fraction", "detuning_fraction", float, "relative offset of omega_R from resonance"),
    ("--omega", "omega", float, "left/middle trap frequency"),
    ("--d-R", "d_R", float, "double-well tunneling distance in units of alpha_R"),
    ("--T-scale", "T_scale", float, "approach time T in units of 1/Omega_R"),
    ("--delta-t-fraction", "delta_t_fraction", float, "delay between the passes as a fraction of T"),
    ("--d-min-scale", "d_min_scale", float, "closest distance in units of max(alpha, alpha_R)"),
    ("--start-scale", "start_scale", float, "resting distance in units of max(alpha, alpha_R)"),
    ("--hold-time", "hold_time", float, "post-protocol hold (default: five tunneling periods)"),
    ("--dt", "dt", float, "time step (default: 0.01/max(omega, omega_R))"),
    ("--record-stride", "record_stride", int, "steps between diagnostics records"),
    ("--n-points", "n_points", int, "grid points"),
    ("--x-min", "x_min", float, "left grid edge"),
    ("--x-max", "x_max", float, "right grid edge"),
    ("--workers", "workers", int, "parallel sweep workers"),
    ("--output", "output_path", str, "directory for CSV / JSON artefacts"),
)


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 1), not argparse's exit 2."""

    def error(self, message):
        raise ConfigurationError(f"{self.prog}: {message}")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML or JSON configuration file")
    for flag, dest, kind, text in CONFIG_FLAGS:
        p.add_argument(flag, dest=dest, type=kind, default=argparse.SUPPRESS, help=text)
    p.add_argument("--intuitive", dest="intuitive", action="store_true", default=argparse.SUPPRESS,
                   help="reverse the pass order (control experiment)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spatial-stirap", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="one protocol run plus hold")
    _add_config_flags(run)
    run.add_argument("--no-model", action="store_true", help="skip the four-level comparison")
    run.add_argument("--tolerate-leak", action="store_true",
                     help="finish runs whose wavefunction reaches the box edges")

    sweep = sub.add_parser("sweep", help="independent runs along one parameter")
    _add_config_flags(sweep)
    sweep.add_argument("--axis", choices=SWEEP_AXES, default=argparse.SUPPRESS, dest="sweep_axis")
    group = sweep.add_mutually_exclusive_group()
    group.add_argument("--values", type=float, nargs="+", dest="sweep_values", default=argparse.SUPPRESS)
    group.add_argument("--range", type=float, nargs=3, metavar=("START", "STOP", "NUM"), dest="sweep_range")
    sweep.add_argument("--no-model", action="store_true", help="skip the four-level comparison")
    sweep.add_argument("--tolerate-leak", action="store_true",
                       help="finish runs whose wavefunction reaches the box edges")

    check = sub.add_parser("check", help="adiabaticity conditions only")
    _add_config_flags(check)
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge defaults, the optional config file and explicit flags."""
    merged = {}
    if getattr(args, "config", None):
        merged.update(flatten_config(load_config_dict(args.config)))
    names = {dest for _, dest, _, _ in CONFIG_FLAGS} | {"intuitive", "sweep_axis", "sweep_values"}
    flags = {k: v for k, v in vars(args).items() if k in names}
    if getattr(args, "sweep_range", None):
        start, stop, num = args.sweep_range
        if num < 1 or num != int(num):
            raise ConfigurationError(f"--range NUM must be a positive integer, got {num:g}")
        flags["sweep_values"] = linspace_values(start, stop, int(num))
    merged.update(coerce_fields(flags))
    return ExperimentConfig(**merged)


def _fmt(value) -> str:
    if isinstance(value, float):
        return "nan" if math.isnan(value) else f"{value:.6g}"
    return str(value)


def _print_summary(summary: dict, out=None) -> None:
    out = out or sys.stdout
    width = max(len(k) for k in summary)
    for key, value in summary.items():
        print(f"{key:<{width}}  {_fmt(value)}", file=out)


def cmd_check(config: ExperimentConfig) -> int:
    rep = check_adiabaticity(config)
    print(f"T0*min(omega, omega_R) = {rep.trap_margin:.4g}  {'ok' if rep.trap_ok else 'VIOLATED'}")
    print(f"T0*Omega_R             = {rep.tunneling_margin:.4g}  {'ok' if rep.tunneling_ok else 'VIOLATED'}")
    return EXIT_OK


def cmd_run(config: ExperimentConfig, args) -> int:
    result = run_protocol(config, four_level=not args.no_model, abort_on_leak=not args.tolerate_leak)
    _print_summary(result.summary)
    for msg in result.adiabaticity.warnings():
        print(f"warning: {msg}", file=sys.stderr)
    if config.output_path:
        emit_report([result], config.output_path)
    return EXIT_OK


def cmd_sweep(config: ExperimentConfig, args) -> int:
    if config.sweep_axis is None:
        raise ConfigurationError("sweep needs --axis (or sweep.axis in the config file)")
    result = run_sweep(config, four_level=not args.no_model, abort_on_leak=not args.tolerate_leak)
    cols = (config.sweep_axis, "status", "double_well", "fid_target",
            "S_R", "S_I", "max_rho_M", "delta_rho_A")
    print("  ".join(f"{c:>12}" for c in cols))
    for row in result.table():
        print("  ".join(f"{_fmt(row.get(c, '')):>12}" for c in cols))
    for p in result.points:
        if not p.ok:
            print(f"point {p.index} ({p.value:g}) failed: {p.error}", file=sys.stderr)
    if config.output_path:
        emit_report(result, config.output_path)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                            format="%(levelname)s %(name)s: %(message)s")
        config = resolve_config(args)
        if args.command == "check":
            return cmd_check(config)
        if args.command == "run":
            return cmd_run(config, args)
        return cmd_sweep(config, args)
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
