"""Command-line interface for stefan-kit.

Exit codes: 0 success, 1 failed check or round trip, 2 invalid input,
3 regime mismatch.
"""

import argparse
import math
import sys
import time
from pathlib import Path
from typing import Any, List, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from . import __version__
from .config import Settings, load_settings
from .equivalence import (
    DEFAULT_TIMES,
    lambda_sweep,
    log_grid,
    roundtrip_check,
    roundtrip_check_convective,
)
from .errors import DomainError, InputError, RegimeError, SolverError, StabilityError
from .logging_config import get_logger, setup_logging
from .model import Convective, Dirichlet, ProblemSpec, critical_h0, load_spec
from .neumann import SimilaritySolution
from .report import profile_rows, solution_summary, write_csv, write_json
from .run_logger import RunLogger, new_run_id
from .solve import solve
from .verify import DEFAULT_TIMES as VERIFY_TIMES
from .verify import VerificationThresholds, run_verification

console = Console()
err_console = Console(stderr=True)
logger = get_logger("cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_REGIME = 3


class H0Grid(BaseModel):
    """Grid of heat transfer coefficients given as lo:hi:n[:lin|log]."""

    lo: float
    hi: float
    n: int
    log: bool = True

    @classmethod
    def parse(cls, text: str) -> "H0Grid":
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"expected lo:hi:n[:lin|log], got {text!r}")
        spacing = parts[3] if len(parts) == 4 else "log"
        if spacing not in ("lin", "log"):
            raise ValueError(f"grid spacing must be 'lin' or 'log', got {spacing!r}")
        return cls(lo=float(parts[0]), hi=float(parts[1]), n=int(parts[2]), log=spacing == "log")

    def points(self, scale: float = 1.0) -> List[float]:
        return log_grid(self.lo * scale, self.hi * scale, self.n, log=self.log)


class RunConfig(BaseModel):
    """Validated command-line request."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    command: Literal["solve", "equivalence", "sweep", "verify"]
    spec_path: Path
    output_path: Path
    profile_path: Optional[Path] = None
    times: Optional[List[float]] = None
    x_samples: int = 200
    T_inf: Optional[float] = None
    h0_grid: Optional[H0Grid] = None
    relative: bool = False
    cells: int = 2000
    tol: Optional[float] = None
    t0: float = 100.0
    t1: float = 400.0
    require_two_phase: bool = False
    workers: Optional[int] = None

    @field_validator("spec_path")
    @classmethod
    def _spec_exists(cls, v: Path) -> Path:
        if not v.is_file():
            raise ValueError(f"spec file not found: {v}")
        return v

    @field_validator("times", mode="before")
    @classmethod
    def _split_times(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [item.strip() for item in v.split(",") if item.strip()]
        return v

    @field_validator("times")
    @classmethod
    def _positive_times(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is None:
            return v
        if not v:
            raise ValueError("at least one time is required")
        if any(not t > 0.0 for t in v):
            raise ValueError("times must be strictly positive")
        return v

    @field_validator("h0_grid", mode="before")
    @classmethod
    def _parse_grid(cls, v: Any) -> Any:
        if isinstance(v, str):
            return H0Grid.parse(v)
        return v

    @field_validator("x_samples")
    @classmethod
    def _enough_samples(cls, v: int) -> int:
        if v < 2:
            raise ValueError("x_samples must be at least 2")
        return v

    @field_validator("cells")
    @classmethod
    def _enough_cells(cls, v: int) -> int:
        if v < 4:
            raise ValueError("cells must be at least 4")
        return v

    @field_validator("tol", "t0", "t1")
    @classmethod
    def _positive(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not v > 0.0:
            raise ValueError("must be strictly positive")
        return v

    @field_validator("workers")
    @classmethod
    def _workers(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError("workers must be at least 1")
        return v

    def resolved_profile_path(self) -> Path:
        if self.profile_path is not None:
            return self.profile_path
        return self.output_path.with_suffix(".csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stefan-kit",
        description="Similarity solutions of the two-phase Stefan problem",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--spec", required=True, help="JSON spec file")
        p.add_argument("--out", required=True, help="Output file")
        p.add_argument("--tol", type=float, default=None, help="Root residual tolerance")

    p = sub.add_parser("solve", help="Solve a spec and write a summary and a profile")
    common(p)
    p.add_argument("--profile", default=None, help="Profile CSV (default: --out with .csv)")
    p.add_argument("--times", default=None, help="Comma-separated times in s")
    p.add_argument("--x-samples", type=int, default=200, help="Profile points per time")
    p.add_argument("--t-inf", type=float, default=None, help="Bulk temperature for bounds")
    p.add_argument(
        "--require-two-phase",
        action="store_true",
        help="Exit with code 3 when the spec does not solidify",
    )

    p = sub.add_parser(
        "equivalence", help="Round trip between the Dirichlet and convective problems"
    )
    common(p)
    p.add_argument("--t-inf", type=float, default=None, help="Bulk temperature (Dirichlet specs)")
    p.add_argument("--times", default=None, help="Comma-separated times of the field comparison")

    p = sub.add_parser("sweep", help="Front coefficient over a grid of heat transfer coefficients")
    common(p)
    p.add_argument("--h0-grid", required=True, help="lo:hi:n[:lin|log]")
    p.add_argument(
        "--relative", action="store_true", help="Grid values are multiples of the threshold"
    )
    p.add_argument("--workers", type=int, default=None, help="Threads for the sweep")

    p = sub.add_parser("verify", help="Residual checks and an enthalpy march")
    common(p)
    p.add_argument("--times", default=None, help="Comma-separated residual times in s")
    p.add_argument("--cells", type=int, default=2000, help="Enthalpy march cells")
    p.add_argument("--t0", type=float, default=100.0, help="March start time in s")
    p.add_argument("--t1", type=float, default=400.0, help="March end time in s")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {
        "command": args.command,
        "spec_path": args.spec,
        "output_path": args.out,
        "tol": args.tol,
    }
    optional = {
        "profile_path": "profile",
        "times": "times",
        "x_samples": "x_samples",
        "T_inf": "t_inf",
        "h0_grid": "h0_grid",
        "relative": "relative",
        "cells": "cells",
        "t0": "t0",
        "t1": "t1",
        "require_two_phase": "require_two_phase",
        "workers": "workers",
    }
    for name, attr in optional.items():
        value = getattr(args, attr, None)
        if value is not None:
            fields[name] = value
    return RunConfig(**fields)


def _solve(config: RunConfig, settings: Settings, spec: ProblemSpec) -> SimilaritySolution:
    return solve(spec, tol=config.tol or settings.tol, xtol=settings.xtol, cap=settings.bracket_cap)


def cmd_solve(config: RunConfig, settings: Settings, runs: RunLogger, run_id: str) -> int:
    spec = load_spec(config.spec_path)
    started = time.perf_counter()
    sol = _solve(config, settings, spec)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    runs.log_solve(
        spec.kind, sol.regime.value, sol.front_coeff, sol.residual, elapsed_ms, run_id=run_id
    )

    if config.require_two_phase and not sol.is_two_phase:
        raise RegimeError(f"{spec.kind} spec is in the pure-conduction regime")

    times = config.times or list(DEFAULT_TIMES)
    write_json(config.output_path, solution_summary(sol, times, T_inf=config.T_inf))
    profile_path = config.resolved_profile_path()
    write_csv(
        profile_path,
        ["t", "x", "temperature", "phase"],
        profile_rows(sol, times, config.x_samples),
    )

    table = Table(title=f"{spec.kind} problem")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="white")
    table.add_row("regime", sol.regime.value)
    if sol.is_two_phase:
        table.add_row("front coefficient", repr(sol.front_coeff))
        table.add_row("residual", f"{sol.residual:.3e}")
    console.print(table)
    console.print(f"Wrote {config.output_path} and {profile_path}")
    return EXIT_OK


def cmd_equivalence(config: RunConfig, settings: Settings, runs: RunLogger, run_id: str) -> int:
    spec = load_spec(config.spec_path)
    times = config.times or list(DEFAULT_TIMES)
    tol = config.tol or settings.tol
    started = time.perf_counter()
    if isinstance(spec.bc, Dirichlet):
        if config.T_inf is None:
            raise InputError("a Dirichlet spec needs --t-inf for the equivalence check")
        report = roundtrip_check(
            spec,
            config.T_inf,
            tol=tol,
            xtol=settings.xtol,
            cap=settings.bracket_cap,
            roundtrip_tol=settings.roundtrip_tol,
            times=times,
        )
    elif isinstance(spec.bc, Convective):
        report = roundtrip_check_convective(
            spec,
            tol=tol,
            xtol=settings.xtol,
            cap=settings.bracket_cap,
            roundtrip_tol=settings.roundtrip_tol,
            times=times,
        )
    else:
        raise InputError("the equivalence check needs a Dirichlet or convective spec")
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    runs.log_equivalence(
        report.direction, report.roundtrip_gap, report.passed, elapsed_ms, run_id=run_id
    )

    write_json(config.output_path, report.to_dict())
    if report.passed:
        console.print(
            f"[green]Equivalence holds:[/green] gap = {report.roundtrip_gap:.3e} "
            f"({report.direction})"
        )
        return EXIT_OK
    err_console.print(
        f"[red]Equivalence gap too large:[/red] {report.roundtrip_gap:.3e} "
        f"(field gap {report.field_gap:.3e})",
        soft_wrap=True,
    )
    return EXIT_FAILED


def cmd_sweep(config: RunConfig, settings: Settings, runs: RunLogger, run_id: str) -> int:
    spec = load_spec(config.spec_path)
    if not isinstance(spec.bc, Convective):
        raise InputError("the sweep needs a convective spec as template")
    if config.h0_grid is None:
        raise InputError("the sweep needs --h0-grid")
    scale = critical_h0(spec) if config.relative else 1.0
    if not (math.isfinite(scale) and scale > 0.0):
        raise InputError("a relative grid needs a positive threshold (T_i > T_f)")
    grid = config.h0_grid.points(scale)

    started = time.perf_counter()
    points = lambda_sweep(
        spec,
        grid,
        tol=config.tol or settings.tol,
        xtol=settings.xtol,
        cap=settings.bracket_cap,
        workers=config.workers or settings.sweep_workers,
    )
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    flagged = sum(1 for p in points if p.flagged)
    runs.log_sweep(len(points), flagged, elapsed_ms, run_id=run_id)

    write_csv(
        config.output_path,
        ["h0", "lambda", "T0_equiv"],
        ([p.h0, p.lam, p.T0_equiv] for p in points),
    )
    console.print(f"Wrote {len(points)} sweep entries to {config.output_path}")
    if flagged:
        console.print(f"[yellow]{flagged} entries at or below the threshold[/yellow]")
    return EXIT_OK


def cmd_verify(config: RunConfig, settings: Settings, runs: RunLogger, run_id: str) -> int:
    spec = load_spec(config.spec_path)
    sol = _solve(config, settings, spec)
    report = run_verification(
        sol,
        thresholds=VerificationThresholds.from_settings(settings),
        times=config.times or VERIFY_TIMES,
        t0=config.t0,
        t1=config.t1,
        cells=config.cells,
    )
    runs.log_verification(
        report.metrics(),
        report.passed,
        report.failures,
        report.elapsed_s * 1000.0,
        run_id=run_id,
    )

    write_json(config.output_path, report.to_dict())
    if report.passed:
        console.print(f"[green]Verification passed[/green] in {report.elapsed_s:.2f} s")
        return EXIT_OK
    err_console.print(
        f"[red]Verification failed:[/red] {', '.join(report.failures)}", soft_wrap=True
    )
    return EXIT_FAILED


HANDLERS = {
    "solve": cmd_solve,
    "equivalence": cmd_equivalence,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def _report_error(title: str, message: str) -> None:
    err_console.print(f"[red]{title}:[/red] {escape(message)}", soft_wrap=True)


def _validation_message(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(item) for item in err["loc"])
        parts.append(f"{loc}: {err['msg']}" if loc else err["msg"])
    return "; ".join(parts)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT

    try:
        settings = load_settings()
    except ValueError as e:
        _report_error("Configuration error", str(e))
        return EXIT_INPUT

    if settings.enable_logging:
        try:
            setup_logging(
                log_dir=settings.log_dir,
                app_log_level=settings.log_level,
                enable_run_logging=settings.enable_run_logging,
                max_bytes=settings.log_max_bytes,
                backup_count=settings.log_backup_count,
            )
        except Exception as e:
            console.print(f"[yellow]Warning: Could not initialize logging:[/yellow] {e}")

    try:
        config = config_from_args(args)
    except ValidationError as e:
        _report_error("Invalid arguments", _validation_message(e))
        return EXIT_INPUT

    run_id = new_run_id()
    runs = RunLogger(enabled=settings.enable_logging and settings.enable_run_logging)
    logger.info(f"Running {config.command} on {config.spec_path} ({run_id})")
    try:
        return HANDLERS[config.command](config, settings, runs, run_id)
    except RegimeError as e:
        _report_error("Regime mismatch", str(e))
        return EXIT_REGIME
    except (InputError, DomainError, StabilityError) as e:
        _report_error("Invalid input", str(e))
        return EXIT_INPUT
    except SolverError as e:
        logger.error(f"Solver failure: {e}")
        _report_error("Solver failure", str(e))
        return EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main CLI entry point."""
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
