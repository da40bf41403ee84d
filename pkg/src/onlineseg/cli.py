"""Command-line entry point: ``onlineseg {run,sweep,landscape}``.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from onlineseg import svg
from onlineseg.analytics import migration_landscape
from onlineseg.exceptions import ParameterError
from onlineseg.harness import SweepConfig, run_single, run_sweep
from onlineseg.metrics import schelling_effect_flag, segregation_reading
from onlineseg.model import ModelParams

log = logging.getLogger(__name__)

DEFAULT_SEED = 12345
DEFAULT_STRIDE = 100
DEFAULT_SWEEP_GRID = "0:0.5:0.025"
DEFAULT_LANDSCAPE_THETA_GRID = "0:0.5:0.01"
DEFAULT_LANDSCAPE_K_GRID = "1:50"


@dataclass
class CliConfig:
    command: str
    params: ModelParams
    output_dir: Path
    emit_svg: bool = False
    sweep: Optional[SweepConfig] = None
    workers: int = 1
    stride: int = DEFAULT_STRIDE
    theta_grid: tuple[float, ...] = ()
    k_grid: tuple[int, ...] = ()


def parse_grid(text: str) -> tuple[float, ...]:
    """``start:stop:step`` with inclusive stop, computed in exact decimal."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected start:stop:step, got {text!r}")
    try:
        start, stop, stride = (Decimal(p) for p in parts)
    except InvalidOperation:
        raise ValueError(f"malformed grid {text!r}") from None
    if stride <= 0 or stop < start:
        raise ValueError(f"grid {text!r} must have step > 0 and stop >= start")
    values = []
    v = start
    while v <= stop:
        values.append(float(v))
        v += stride
    return tuple(values)


def parse_int_grid(text: str) -> tuple[int, ...]:
    """``start:stop`` or ``start:stop:step`` over integers, inclusive."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"expected start:stop[:step], got {text!r}")
    start, stop, *rest = (int(p) for p in parts)
    stride = rest[0] if rest else 1
    if stride <= 0 or stop < start or start < 1:
        raise ValueError(f"grid {text!r} must be ascending positive integers")
    return tuple(range(start, stop + 1, stride))


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--agents", type=int, default=100)
    common.add_argument("--communities", type=int, default=20)
    common.add_argument("--k", type=int, default=10)
    common.add_argument("--theta", type=float, default=0.1)
    common.add_argument("--steps", type=int, default=100_000)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--replicates", type=int, default=10)
    common.add_argument("--theta-grid", default=None, help="start:stop:step, inclusive")
    common.add_argument("--stride", type=int, default=DEFAULT_STRIDE)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--svg", action="store_true", help="also write SVG charts")
    common.add_argument("--balanced-init", type=_bool, default=True, metavar="BOOL")
    common.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(
        prog="onlineseg",
        description="Community-based Schelling segregation simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="single run, community opinion time series")
    sub.add_parser("sweep", parents=[common], help="final segregation across theta")
    landscape = sub.add_parser("landscape", parents=[common], help="analytic migration probability")
    landscape.add_argument("--k-grid", default=DEFAULT_LANDSCAPE_K_GRID, help="start:stop[:step]")
    return parser


def parse_args(argv: Sequence[str]) -> CliConfig:
    """Parse and validate flags.  Exits with status 2 on any usage error."""
    parser = _build_parser()
    ns = parser.parse_args(list(argv))
    if not 0.0 <= ns.theta <= 1.0:
        parser.error(f"--theta must lie in [0, 1], got {ns.theta}")
    if ns.stride < 1:
        parser.error("--stride must be >= 1")
    if ns.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        params = ModelParams(
            n_agents=ns.agents,
            n_communities=ns.communities,
            k_interactors=ns.k,
            theta=ns.theta,
            max_steps=ns.steps,
            seed=ns.seed,
            balanced_init=ns.balanced_init,
        )
    except ParameterError as exc:
        parser.error(str(exc))

    config = CliConfig(
        command=ns.command,
        params=params,
        output_dir=Path(ns.out),
        emit_svg=ns.svg,
        workers=ns.workers,
        stride=ns.stride,
    )
    try:
        if ns.command == "sweep":
            config.theta_grid = parse_grid(ns.theta_grid or DEFAULT_SWEEP_GRID)
            config.sweep = SweepConfig(
                base=params,
                theta_values=config.theta_grid,
                replicates=ns.replicates,
                record_stride=ns.stride,
            )
        elif ns.command == "landscape":
            config.theta_grid = parse_grid(ns.theta_grid or DEFAULT_LANDSCAPE_THETA_GRID)
            config.k_grid = parse_int_grid(ns.k_grid)
            if not all(0.0 <= t <= 1.0 for t in config.theta_grid):
                raise ValueError("--theta-grid values must lie in [0, 1]")
    except (ValueError, ParameterError) as exc:
        parser.error(str(exc))
    return config


def fmt(value) -> str:
    """Shortest round-trip text for a CSV cell; ``None`` becomes empty."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def _prepare_output(directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    if not os.access(directory, os.W_OK):
        raise PermissionError(f"output directory {directory} is not writable")


def cmd_run(config: CliConfig) -> int:
    params = config.params
    series = run_single(params, record_stride=config.stride)
    header = ["step", "phi"] + [f"mean_c{c}" for c in range(params.n_communities)]
    rows = (
        [t, phi, *means]
        for t, phi, means in zip(series.steps, series.phi_trace, series.community_means)
    )
    _write_csv(config.output_dir / "timeseries.csv", header, rows)
    if config.emit_svg:
        lines = list(zip(*series.community_means))
        _write_text(
            config.output_dir / "timeseries.svg",
            svg.line_chart(
                series.steps,
                lines,
                title=f"Community mean opinion, theta={params.theta:g}",
                xlabel="step",
                ylabel="mean opinion",
            ),
        )
    reading = segregation_reading(series.final_state)
    print(f"phi={fmt(reading.phi)}")
    print(f"homophily={fmt(reading.homophily)}")
    print(f"homogeneous_agent_fraction={fmt(reading.homogeneous_agent_fraction)}")
    print(f"schelling_effect={schelling_effect_flag(reading, params.theta)}")
    return 0


def cmd_sweep(config: CliConfig) -> int:
    results = run_sweep(config.sweep, workers=config.workers)
    r = config.sweep.replicates
    header = ["theta", "phi_mean", "ci_low", "ci_high"] + [f"phi_rep_{j}" for j in range(r)]
    rows = ([res.theta, res.phi_mean, res.ci_low, res.ci_high, *res.phi_values] for res in results)
    _write_csv(config.output_dir / "sweep.csv", header, rows)
    if config.emit_svg:
        _write_text(
            config.output_dir / "sweep.svg",
            svg.band_chart(
                [res.theta for res in results],
                [res.phi_mean for res in results],
                [res.ci_low for res in results],
                [res.ci_high for res in results],
                title=f"Final segregation ({r} replicates, 95% CI)",
                xlabel="theta",
                ylabel="phi",
            ),
        )
    for res in results:
        print(f"theta={fmt(res.theta)} phi_mean={res.phi_mean:.4f} ci=[{res.ci_low:.4f}, {res.ci_high:.4f}]")
    return 0


def cmd_landscape(config: CliConfig) -> int:
    grid = migration_landscape(config.k_grid, config.theta_grid)
    rows = ([k, theta, float(p), float(lp)] for k, theta, p, lp in grid.rows())
    _write_csv(config.output_dir / "landscape.csv", ["k", "theta", "prob", "log10_prob"], rows)
    if config.emit_svg:
        _write_text(
            config.output_dir / "landscape.svg",
            svg.heatmap(grid.k_values, grid.theta_values, grid.probabilities,
                        title="Pr(migrate)", xlabel="theta", ylabel="k"),
        )
        _write_text(
            config.output_dir / "landscape_log.svg",
            svg.heatmap(grid.k_values, grid.theta_values, grid.log10_probabilities,
                        title="log10 Pr(migrate)", xlabel="theta", ylabel="k"),
        )
    print(f"wrote {len(grid.k_values) * len(grid.theta_values)} rows")
    return 0


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "landscape": cmd_landscape}


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _prepare_output(config.output_dir)
        return COMMANDS[config.command](config)
    except OSError as exc:
        log.error("%s", exc)
        return 1
    except Exception as exc:
        log.error("%s failed: %s", config.command, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
