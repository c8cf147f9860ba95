"""Command-line interface: run experiments, compare runs, validate regimes.

Subcommands:
  run       execute one experiment and emit plot-ready CSV data + manifest
  compare   align completed runs and tabulate distribution distances
  validate  print the regime report for a configuration
  preset    list the built-in scenario presets
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .config_io import ConfigError, emit_config, load_config
from .core import ExperimentConfig, RegimeReport, validate_regime
from .presets import IMPLEMENTATION_CHOICE_NOTE, get_preset, preset_names
from .propagators import run_experiment

DEFAULT_THETA_POINTS = 1024


def _verdict(flag: bool | None) -> str:
    if flag is None:
        return "n/a"
    return "PASS" if flag else "FAIL"


def regime_text(report: RegimeReport) -> str:
    lines = [
        f"energy E = {report.energy:.17g}",
        f"continuous scale pi*hbar/tau = {report.resolution_scale:.17g}",
        f"dominance factor = {report.dominance_factor:.17g}",
        "continuous clock energy condition "
        f"(E >> pi*hbar/tau): {_verdict(report.continuous_ok)}",
        f"classical time of flight t_f = {report.classical_time:.17g}",
        f"clock period 2*pi/omega = {report.clock_period:.17g}",
        f"max-time check (t_f < period): {_verdict(report.max_time_ok)}",
        f"degenerate clock (j = 0): {report.degenerate_clock}",
    ]
    if report.kick_window is None:
        lines.append("kick window: undefined (degenerate clock)")
    else:
        lo, hi = report.kick_window
        lines.append(f"kick window = ({lo:.17g}, {hi:.17g})")
    if report.kick_period is not None:
        lines += [
            f"kick period T = {report.kick_period:.17g}",
            "kick working window (t_f > T > (2j+1)*tau/j): "
            f"{_verdict(report.kick_in_window)}",
            "max modular energy scale (hbar*nu_n/T)_max = "
            f"{report.max_modular_energy:.17g}",
            "kicked disturbance condition (E >> (hbar*nu_n/T)_max): "
            f"{_verdict(report.kicked_ok)}",
        ]
    return "\n".join(lines) + "\n"


def regime_warnings(config: ExperimentConfig, report: RegimeReport) -> list[str]:
    warnings = []
    if config.mode == "continuous" and not report.continuous_ok:
        warnings.append(
            "continuous clock outside its validity regime (E is not >> pi*hbar/tau)"
        )
    if config.mode == "kicked":
        if report.kick_in_window is False:
            warnings.append("kick period outside the working window")
        if report.kicked_ok is False:
            warnings.append(
                "kicked clock disturbance not negligible (E not >> max kick scale)"
            )
    if not report.max_time_ok:
        warnings.append("classical time of flight exceeds the clock period")
    if report.degenerate_clock:
        warnings.append("degenerate clock (j = 0) measures nothing")
    return warnings


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def cmd_run(
    config: ExperimentConfig,
    out_dir: Path,
    workers: int = 1,
    theta_points: int = DEFAULT_THETA_POINTS,
    label: str = "",
) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = run_experiment(config, workers=workers, theta_points=theta_points)
    report = result.regime
    warnings = regime_warnings(config, report)

    manifest: list[tuple[str, str]] = [
        ("label", label or config.mode),
        ("mode", config.mode),
        ("theta_points", str(theta_points)),
        ("workers", str(workers)),
        ("note.parameters", IMPLEMENTATION_CHOICE_NOTE),
    ]
    data_files = []

    if config.mode == "ideal-reference":
        series = result.ideal
        _write_csv(out_dir / "ideal_dwell.csv", ["t", "density", "cdf"],
                   [series.times, series.density, series.cdf])
        data_files.append("ideal_dwell.csv")
        manifest.append(("mass.ideal_dwell.csv", f"{series.total_mass:.17g}"))
    else:
        series = analysis.state_tof_distribution(
            result.final_state, theta_points, label=label or config.mode
        )
        for name in ("tof_density.csv", "tof_cdf.csv"):
            _write_csv(out_dir / name, ["t", "density", "cdf"],
                       [series.times, series.density, series.cdf])
            data_files.append(name)
            manifest.append((f"mass.{name}", f"{series.total_mass:.17g}"))
        trans = analysis.transmission_report(result.final_state, config.region)
        manifest += [
            ("diag.norm_drift", f"{result.norm_drift:.17g}"),
            ("diag.max_channel_drift", f"{result.max_channel_drift:.17g}"),
            ("diag.region_mass_final", f"{result.region_mass_final:.17g}"),
            ("diag.boundary_mass_final", f"{result.boundary_mass_final:.17g}"),
            ("transmission.left", f"{trans.total_left:.17g}"),
            ("transmission.inside", f"{trans.total_inside:.17g}"),
            ("transmission.right", f"{trans.total_right:.17g}"),
        ]

    (out_dir / "config.txt").write_text(emit_config(config), encoding="utf-8")
    (out_dir / "regime.txt").write_text(regime_text(report), encoding="utf-8")
    data_files += ["config.txt", "regime.txt"]

    for w in warnings:
        manifest.append(("warning", w))
    manifest.append(("wall_time_s", f"{result.wall_time:.6f}"))
    for name in data_files:
        manifest.append((f"file.{name}", _sha256(out_dir / name)))

    manifest_text = "".join(f"{k} = {v}\n" for k, v in manifest)
    (out_dir / "manifest.txt").write_text(manifest_text, encoding="utf-8")

    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"run complete: {out_dir}")
    return out_dir


def _load_run_series(run_dir: Path) -> analysis.DistributionSeries:
    for name in ("tof_density.csv", "ideal_dwell.csv"):
        path = run_dir / name
        if path.exists():
            data = np.loadtxt(path, delimiter=",", skiprows=1)
            return analysis.DistributionSeries(
                times=data[:, 0], density=data[:, 1], cdf=data[:, 2],
                label=run_dir.name,
            )
    raise FileNotFoundError(f"no distribution data in {run_dir}")


def cmd_compare(run_dirs: list[Path], out_dir: Path) -> Path:
    if len(run_dirs) < 2:
        raise ValueError("compare needs at least two completed runs")
    series = [_load_run_series(Path(d)) for d in run_dirs]
    base = series[0].times
    for s in series[1:]:
        if s.times.shape != base.shape or not np.allclose(
            s.times, base, rtol=0.0, atol=1e-12
        ):
            raise ValueError(
                f"time grid of {s.label} does not match {series[0].label}"
            )
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    _write_csv(out_dir / "compare_cdf.csv",
               ["t"] + [s.label for s in series],
               [base] + [s.cdf for s in series])

    with open(out_dir / "distances.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("a,b,sup_cdf,l1_density\n")
        for i, a in enumerate(series):
            for b in series[i + 1:]:
                sup_cdf, l1 = analysis.distribution_distance(a, b)
                fh.write(f"{a.label},{b.label},{sup_cdf:.17g},{l1:.17g}\n")
    print(f"comparison written: {out_dir}")
    return out_dir


def cmd_validate(config: ExperimentConfig) -> None:
    sys.stdout.write(regime_text(validate_regime(config)))


def _resolve_config(args) -> ExperimentConfig:
    if args.config and args.preset:
        raise ConfigError("use either --config or --preset, not both")
    if args.config:
        config = load_config(args.config)
    elif args.preset:
        config = get_preset(args.preset)
    else:
        raise ConfigError("one of --config or --preset is required")
    if getattr(args, "kick_at_zero", False):
        config = dataclasses.replace(config, kick_at_zero=True)
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tofclock",
        description="Quantum time-of-flight measurements with continuous "
        "and kicked clocks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p):
        p.add_argument("--config", type=Path, help="configuration file")
        p.add_argument("--preset", help="built-in scenario name")

    run = sub.add_parser("run", help="execute one experiment")
    add_config_args(run)
    run.add_argument("--out", type=Path, default=Path("tofclock_run"))
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--theta-points", type=int, default=DEFAULT_THETA_POINTS)
    run.add_argument("--kick-at-zero", action="store_true",
                     help="also kick at t = 0 (kicked mode)")

    cmp_p = sub.add_parser("compare", help="compare completed runs")
    cmp_p.add_argument("run_dirs", nargs="+", type=Path)
    cmp_p.add_argument("--out", type=Path, default=Path("tofclock_compare"))

    val = sub.add_parser("validate", help="print the regime report")
    add_config_args(val)

    pre = sub.add_parser("preset", help="preset utilities")
    pre.add_argument("action", choices=["list"])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            label = args.preset or (args.config.stem if args.config else "")
            cmd_run(_resolve_config(args), args.out, workers=args.workers,
                    theta_points=args.theta_points, label=label)
        elif args.command == "compare":
            cmd_compare(args.run_dirs, args.out)
        elif args.command == "validate":
            cmd_validate(_resolve_config(args))
        elif args.command == "preset":
            for name in preset_names():
                print(name)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
