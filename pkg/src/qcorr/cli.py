"""Command-line front end: configure a sweep, run it, write CSV/JSON plus
optional audit and event reports.

Exit status: 0 on success, 2 on a configuration error (bad flag value,
unknown name), 3 on a numeric-domain error.  Identical invocations produce
byte-identical output files; no randomness is used anywhere.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .channels import Channel
from .correlations import OptimizerSettings
from .errors import ConfigurationError, NumericDomainError
from .qmat import ENTROPY_EIG_CUTOFF, PSD_EIG_FLOOR
from .scenarios import (
    Bipartition,
    CorrelationRecord,
    ESD_THRESHOLD,
    Event,
    OracleComparison,
    ScenarioConfig,
    ScenarioKind,
    audit_analytic,
    detect_events,
    sweep,
    uniform_grid,
)

#: CSV column -> CorrelationRecord attribute, in output order.
CSV_COLUMNS: tuple[tuple[str, str], ...] = (
    ("scenario", "scenario"),
    ("a", "a"),
    ("p", "p"),
    ("bipartition", "bipartition"),
    ("total", "total"),
    ("classical_K", "classical_k"),
    ("quantum_Q", "quantum_q"),
    ("discord_D", "discord_d"),
    ("classical_C", "classical_c"),
    ("concurrence", "concurrence"),
    ("theta_a", "theta_a"),
    ("phi_a", "phi_a"),
    ("theta_b", "theta_b"),
    ("phi_b", "phi_b"),
    ("oracle_max_abs_dev", "oracle_max_abs_dev"),
)

#: Measures scanned when --events is requested.
EVENT_MEASURES = ("concurrence", "classical_K", "quantum_Q", "discord_D")


def format_real(x: float) -> str:
    """Fixed 12-decimal rendering; all emitted reals are O(1) in magnitude."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # avoid "-0.000000000000"
    return f"{x:.12f}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcorr",
        description=(
            "Sweep the correlation measures of two qubits coupled to two "
            "independent, non-identical noisy environments."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--scenario",
        default="ape",
        choices=["ape", "abe", "ppe", "custom"],
        help="environment combination (default: ape)",
    )
    parser.add_argument(
        "--channel-a",
        default=None,
        metavar="NAME",
        help="channel on qubit A (required with --scenario custom)",
    )
    parser.add_argument(
        "--channel-b",
        default=None,
        metavar="NAME",
        help="channel on qubit B (required with --scenario custom)",
    )
    parser.add_argument(
        "--a",
        type=float,
        default=0.4,
        help="initial-state parameter in (0, 1] (default: 0.4)",
    )
    parser.add_argument(
        "--p-steps",
        type=int,
        default=101,
        help="number of p grid points, inclusive of both ends (default: 101)",
    )
    parser.add_argument("--p-min", type=float, default=0.0, help="grid start (default: 0)")
    parser.add_argument("--p-max", type=float, default=1.0, help="grid end (default: 1)")
    parser.add_argument(
        "--bipartitions",
        default="all",
        metavar="LIST",
        help="comma list of AB,AEA,BEB,AEB,BEA,EAEB, or 'all' (default: all)",
    )
    parser.add_argument(
        "--grid",
        type=int,
        default=24,
        help="optimizer grid points per angle (default: 24)",
    )
    parser.add_argument(
        "--refine-iters",
        type=int,
        default=200,
        help="optimizer simplex-refinement iterations (default: 200)",
    )
    parser.add_argument(
        "--measured-side",
        default="b",
        choices=["a", "b"],
        help="side measured for the one-sided discord (default: b)",
    )
    parser.add_argument("--out", default=None, metavar="PATH", help="output file path")
    parser.add_argument(
        "--format",
        default="csv",
        choices=["csv", "json"],
        help="output format (default: csv)",
    )
    parser.add_argument(
        "--oracle-check",
        action="store_true",
        help="compare each reduced state against its tabulated analytic matrix "
        "and write a discrepancy report",
    )
    parser.add_argument(
        "--events",
        action="store_true",
        help="detect deaths/revivals and sudden changes; writes an events file",
    )
    parser.add_argument(
        "--validate",
        action="store_true",
        help="dry run: check the configuration, print a cost estimate, exit",
    )
    return parser


def _parse_bipartitions(text: str) -> tuple[Bipartition, ...]:
    if text.strip().lower() == "all":
        return tuple(Bipartition)
    names = [part for part in (x.strip() for x in text.split(",")) if part]
    if not names:
        raise ConfigurationError("--bipartitions must name at least one bipartition")
    return tuple(Bipartition.from_name(name) for name in names)


def config_from_args(args: argparse.Namespace) -> ScenarioConfig:
    if not 0.0 < args.a <= 1.0:
        raise ConfigurationError(f"--a must lie in (0, 1], got {args.a!r}")
    if args.p_steps < 1:
        raise ConfigurationError(f"--p-steps must be >= 1, got {args.p_steps}")
    if not 0.0 <= args.p_min <= 1.0 or not 0.0 <= args.p_max <= 1.0:
        raise ConfigurationError("--p-min/--p-max must lie in [0, 1]")
    if args.p_steps > 1 and args.p_min >= args.p_max:
        raise ConfigurationError("--p-min must be below --p-max")
    if args.grid < 4:
        raise ConfigurationError(f"--grid must be >= 4, got {args.grid}")
    if args.refine_iters < 0:
        raise ConfigurationError("--refine-iters must be non-negative")

    scenario: ScenarioKind | None
    channel_a = channel_b = None
    if args.scenario == "custom":
        scenario = None
        if args.channel_a is None or args.channel_b is None:
            raise ConfigurationError(
                "--scenario custom requires --channel-a and --channel-b"
            )
        channel_a = Channel.from_name(args.channel_a)
        channel_b = Channel.from_name(args.channel_b)
        if args.oracle_check:
            raise ConfigurationError(
                "--oracle-check is not available with --scenario custom "
                "(no tabulated matrices exist for arbitrary channel pairs)"
            )
    else:
        scenario = ScenarioKind.from_name(args.scenario)
        if args.channel_a is not None or args.channel_b is not None:
            raise ConfigurationError(
                "--channel-a/--channel-b are only accepted with --scenario custom"
            )

    return ScenarioConfig(
        scenario=scenario,
        a=args.a,
        p_grid=uniform_grid(args.p_min, args.p_max, args.p_steps),
        bipartitions=_parse_bipartitions(args.bipartitions),
        optimizer=OptimizerSettings(
            grid_points_per_angle=args.grid, refine_iterations=args.refine_iters
        ),
        oracle_check=args.oracle_check,
        measured_side=args.measured_side.upper(),
        channel_a=channel_a,
        channel_b=channel_b,
    )


def estimate(config: ScenarioConfig) -> dict:
    """Dry-run cost estimate: grid-stage plus refinement evaluations."""
    n_points = len(config.p_grid)
    n_pairs = len(config.bipartitions)
    grid_stage = n_points * n_pairs * config.optimizer.grid_points_per_angle**4
    refine_stage = n_points * n_pairs * config.optimizer.refine_iterations
    return {
        "scenario": config.scenario_name,
        "a": config.a,
        "p_steps": n_points,
        "bipartitions": [b.name for b in config.bipartitions],
        "grid_points_per_angle": config.optimizer.grid_points_per_angle,
        "refine_iterations": config.optimizer.refine_iterations,
        "grid_stage_evaluations": grid_stage,
        "refine_stage_evaluations": refine_stage,
        "total_evaluations": grid_stage + refine_stage,
    }


def _record_fields(record: CorrelationRecord) -> list[str]:
    fields = []
    for _, attr in CSV_COLUMNS:
        value = getattr(record, attr)
        if attr in ("scenario", "bipartition"):
            fields.append(str(value))
        elif value is None:
            fields.append("")
        else:
            fields.append(format_real(value))
    return fields


def write_records_csv(records: Sequence[CorrelationRecord], path: Path) -> None:
    lines = [",".join(name for name, _ in CSV_COLUMNS)]
    lines += [",".join(_record_fields(r)) for r in records]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_records_json(records: Sequence[CorrelationRecord], path: Path) -> None:
    rows = []
    for record in records:
        row = {}
        for name, attr in CSV_COLUMNS:
            row[name] = getattr(record, attr)
        rows.append(row)
    payload = json.dumps({"records": rows}, indent=2, sort_keys=False)
    path.write_text(payload + "\n", encoding="utf-8", newline="\n")


def write_sidecar(config: ScenarioConfig, args: argparse.Namespace, path: Path) -> None:
    """Resolved settings, defaults included, so every run is self-describing."""
    channel_a, channel_b = config.channels
    payload = {
        "a": config.a,
        "bipartitions": [b.name for b in config.bipartitions],
        "channel_a": channel_a.value,
        "channel_b": channel_b.value,
        "entropy_eig_cutoff": ENTROPY_EIG_CUTOFF,
        "esd_threshold": ESD_THRESHOLD,
        "events": bool(args.events),
        "format": args.format,
        "grid_points_per_angle": config.optimizer.grid_points_per_angle,
        "measured_side": config.measured_side,
        "oracle_check": config.oracle_check,
        "p_max": args.p_max,
        "p_min": args.p_min,
        "p_steps": len(config.p_grid),
        "psd_eig_floor": PSD_EIG_FLOOR,
        "refine_iterations": config.optimizer.refine_iterations,
        "refine_tolerance": config.optimizer.refine_tolerance,
        "scenario": config.scenario_name,
        "version": __version__,
    }
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )


def write_discrepancies(rows: Sequence[OracleComparison], path: Path) -> None:
    """Flagged tabulated matrices: validation failures and numeric mismatches."""
    lines = ["scenario,pair,a,p,max_abs_dev,trace_of_printed_matrix,printed_is_valid"]
    for row in rows:
        lines.append(
            ",".join(
                [
                    row.scenario,
                    row.pair,
                    format_real(row.a),
                    format_real(row.p),
                    format_real(row.max_abs_dev),
                    format_real(row.printed_trace),
                    "true" if row.printed_is_valid else "false",
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_events(rows: Sequence[tuple[str, float, str, Event]], path: Path) -> None:
    lines = ["scenario,a,bipartition,measure,kind,p_lo,p_hi"]
    for scenario, a, bipartition, event in rows:
        lines.append(
            ",".join(
                [
                    scenario,
                    format_real(a),
                    bipartition,
                    event.measure,
                    event.kind,
                    format_real(event.p_lo),
                    format_real(event.p_hi),
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _collect_events(
    config: ScenarioConfig, records: Sequence[CorrelationRecord]
) -> list[tuple[str, float, str, Event]]:
    rows = []
    for pair in config.bipartitions:
        series = [r for r in records if r.bipartition == pair.name]
        for measure in EVENT_MEASURES:
            for event in detect_events(series, measure, config=config):
                rows.append((config.scenario_name, config.a, pair.name, event))
    return rows


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if args.validate:
            print(json.dumps(estimate(config), indent=2, sort_keys=True))
            return 0
        if args.out is None:
            raise ConfigurationError("--out is required unless --validate is given")
        out = Path(args.out)
        if out.parent and not out.parent.exists():
            raise ConfigurationError(f"--out directory {out.parent} does not exist")

        records = sweep(config)

        if args.format == "csv":
            write_records_csv(records, out)
        else:
            write_records_json(records, out)
        write_sidecar(config, args, out.with_suffix(".config.json"))
        if config.oracle_check and config.scenario is not None:
            audit = audit_analytic(
                config.scenario, config.a, config.p_grid, config.bipartitions
            )
            flagged = [row for row in audit if row.flagged]
            write_discrepancies(flagged, out.with_suffix(".discrepancies.csv"))
        if args.events:
            write_events(_collect_events(config, records), out.with_suffix(".events.csv"))
    except ConfigurationError as err:
        print(f"qcorr: configuration error: {err}", file=sys.stderr)
        return 2
    except NumericDomainError as err:
        print(f"qcorr: numeric-domain error: {err}", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
