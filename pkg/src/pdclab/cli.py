"""Command-line interface.

Subcommands:
  sweep       angle-grid sweep: theory columns plus simulated estimates
  identities  brute-force cross-checks of the closed-form identities
  counts      singles/coincidence scan versus theta2 at theta1 = 22.5 deg
  timing      check the time-scale separation conditions

All angles cross this boundary in degrees; the library works in radians
internally. Tables go to --out when given, otherwise to stdout; status
messages go to stderr. Exit codes: 0 success, 1 configuration error,
2 I/O error, 3 a requested check failed its tolerance.

The base seed is taken from --seed, else from the config file, else from
the PDC_LAB_SEED environment variable, else 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from typing import Any, Sequence

from .counting import DEFAULT_SEPARATION_FACTOR, check_timing
from .errors import ConfigError, PdclabError
from .runner import (
    SweepSpec,
    emit,
    format_rows,
    run_identity_suite,
    run_sweep,
    sweep_spec_from_dict,
)

_COUNTS_THETA1_DEG = 22.5


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; here every
    configuration problem, including bad flags, exits 1."""

    def error(self, message: str) -> Any:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_angle_list(text: str, flag: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated numbers: {exc}") from exc


def _read_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config root must be an object, got {type(data).__name__}")
    return data


def _seed_from_env() -> int | None:
    raw = os.environ.get("PDC_LAB_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"PDC_LAB_SEED must be an integer, got {raw!r}") from exc


def _resolve_seed(cli_seed: int | None, config: dict[str, Any]) -> int:
    if cli_seed is not None:
        return cli_seed
    detection = config.get("detection")
    if isinstance(detection, dict) and "seed" in detection:
        seed = detection["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ConfigError(f"config detection.seed must be an integer, got {seed!r}")
        return seed
    env_seed = _seed_from_env()
    if env_seed is not None:
        return env_seed
    return 0


def _build_spec(args: argparse.Namespace, fixed_theta1: float | None = None) -> SweepSpec:
    """Merge config file, flags, and environment into one SweepSpec.
    Flag > config > environment for every field both can set."""
    config = _read_config(args.config)
    spec = sweep_spec_from_dict(config)
    seed = _resolve_seed(args.seed, config)
    changes: dict[str, Any] = {"detection": replace(spec.detection, seed=seed)}
    if fixed_theta1 is not None:
        changes["theta1_deg"] = (fixed_theta1,)
    elif getattr(args, "theta1_deg", None) is not None:
        changes["theta1_deg"] = _parse_angle_list(args.theta1_deg, "--theta1-deg")
    if getattr(args, "theta2_deg", None) is not None:
        changes["theta2_deg"] = _parse_angle_list(args.theta2_deg, "--theta2-deg")
    if args.format is not None:
        changes["format"] = args.format
    if args.out is not None:
        changes["output_path"] = args.out
    return replace(spec, **changes)


def _resolve_plot_path(plot_arg: str | None, output_path: str | None) -> str | None:
    if plot_arg is None:
        return None
    if plot_arg != "":
        return plot_arg
    if output_path is None:
        raise ConfigError("--plot without a path requires --out to derive one from")
    stem, _ = os.path.splitext(output_path)
    return stem + ".png"


def _write_table(rows: Sequence[Any], spec: SweepSpec) -> None:
    if spec.output_path is not None:
        emit(rows, spec.format, spec.output_path)
        print(f"wrote {len(rows)} rows to {spec.output_path}", file=sys.stderr)
    else:
        sys.stdout.write(format_rows(rows, spec.format))


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = _build_spec(args)
    plot_path = _resolve_plot_path(args.plot, spec.output_path)
    rows = run_sweep(spec)
    _write_table(rows, spec)
    if plot_path is not None:
        from .figures import render_sweep_figure

        render_sweep_figure(rows, plot_path)
        print(f"wrote figure to {plot_path}", file=sys.stderr)
    return 0


def _cmd_counts(args: argparse.Namespace) -> int:
    spec = _build_spec(args, fixed_theta1=_COUNTS_THETA1_DEG)
    plot_path = _resolve_plot_path(args.plot, spec.output_path)
    rows = run_sweep(spec)
    _write_table(rows, spec)
    if plot_path is not None:
        from .figures import render_counts_figure

        render_counts_figure(rows, plot_path)
        print(f"wrote figure to {plot_path}", file=sys.stderr)
    return 0


def _cmd_identities(args: argparse.Namespace) -> int:
    seed = args.seed
    if seed is None:
        seed = _seed_from_env()
    if seed is None:
        seed = 0
    report = run_identity_suite(max_d=args.max_d, trials=args.trials, seed=seed)
    text = report.as_json() if args.format == "json" else report.as_text()
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        print(f"wrote report to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 3


def _cmd_timing(args: argparse.Namespace) -> int:
    config = _read_config(args.config)
    spec = sweep_spec_from_dict(config)
    report = check_timing(spec.timing, args.separation_factor)

    def yesno(flag: bool) -> str:
        return "pass" if flag else "FAIL"

    print(
        f"pulse separation resolves pump pulses: {yesno(report.pulse_separation_ok)} "
        f"(ratio {report.sep_over_pulse:.4g})"
    )
    print(
        f"pulse separation resolves photon correlation: {yesno(report.correlation_ok)} "
        f"(ratio {report.sep_over_corr:.4g})"
    )
    print(
        f"coincidence window covers both bins: {yesno(report.window_ok)} "
        f"(ratio {report.window_over_slow:.4g}, need >= {report.separation_factor:g})"
    )
    print(f"timing: {yesno(report.all_ok)}")
    return 0 if report.all_ok else 3


def _add_common_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="JSON", help="JSON config file")
    parser.add_argument("--seed", type=int, metavar="N", help="base RNG seed")
    parser.add_argument("--out", metavar="PATH", help="write the table here instead of stdout")
    parser.add_argument(
        "--format", choices=("csv", "json"), help="table format (default csv)"
    )
    parser.add_argument(
        "--plot",
        nargs="?",
        const="",
        default=None,
        metavar="PNG",
        help="also render a figure (path defaults to the --out stem + .png)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="pdclab",
        description=(
            "Entanglement of down-conversion photon pairs from one-sided "
            "two-photon counting: closed-form theory, brute-force identity "
            "checks, and a seeded counting-statistics simulator."
        ),
        epilog=(
            "Angles are given in degrees. Exit codes: 0 success, 1 config "
            "error, 2 I/O error, 3 check failure. PDC_LAB_SEED sets the "
            "default seed."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser(
        "sweep",
        help="simulate an angle-grid sweep with theory columns",
        description=(
            "Walk the (theta1, theta2) grid; emit closed-form K, C, and "
            "polarization sub-concurrence next to simulated counts and "
            "their estimates. Row i uses seed base+i."
        ),
    )
    _add_common_output_flags(p_sweep)
    p_sweep.add_argument(
        "--theta1-deg", metavar="LIST", help="comma-separated first waveplate angles"
    )
    p_sweep.add_argument(
        "--theta2-deg", metavar="LIST", help="comma-separated second waveplate angles"
    )
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_id = sub.add_parser(
        "identities",
        help="brute-force the closed-form identities on random inputs",
        description=(
            "Check the two-copy overlap identity, the equivalence of the "
            "two concurrence routes, and the coincidence-probability chain "
            "against direct Fock-space computation."
        ),
    )
    p_id.add_argument("--max-d", type=int, default=6, metavar="D", help="largest mode count")
    p_id.add_argument("--trials", type=int, default=1000, metavar="N", help="random draws")
    p_id.add_argument("--seed", type=int, metavar="N", help="RNG seed")
    p_id.add_argument(
        "--format", choices=("text", "json"), default="text", help="report format"
    )
    p_id.add_argument("--out", metavar="PATH", help="write the report here")
    p_id.set_defaults(handler=_cmd_identities)

    p_counts = sub.add_parser(
        "counts",
        help="singles and coincidences versus theta2 at theta1 = 22.5 deg",
        description=(
            "Simulate raw counter readings across theta2 at fixed "
            "theta1 = 22.5 deg. Singles are flat; coincidences follow the "
            "spectrum. Only the shape is calibrated, not the absolute "
            "count scale."
        ),
    )
    _add_common_output_flags(p_counts)
    p_counts.add_argument(
        "--theta2-deg", metavar="LIST", help="comma-separated second waveplate angles"
    )
    p_counts.set_defaults(handler=_cmd_counts)

    p_timing = sub.add_parser(
        "timing",
        help="check the time-scale separation conditions",
        description=(
            "Verify pulse separation exceeds pump duration and correlation "
            "time while the coincidence window dwarfs both."
        ),
    )
    p_timing.add_argument("--config", metavar="JSON", help="JSON config file")
    p_timing.add_argument(
        "--separation-factor",
        type=float,
        default=DEFAULT_SEPARATION_FACTOR,
        metavar="X",
        help="required window-to-timescale ratio (default %(default)g)",
    )
    p_timing.set_defaults(handler=_cmd_timing)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PdclabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
