"""Batch evaluation over (T, H) grids and CSV serialization.

Grids are evaluated point by point with pure solver calls, so a sweep is
deterministic: the same spec and parameters always produce byte-identical
CSV.  Individual solver failures are recorded as row markers and the sweep
continues; more than 10% failed points aborts the sweep.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .numerics import NumericsError, QuadSpec, RootSpec
from .params import DomainBox, MaterialParams
from .solvers import DomainWarning, solve_gap_squared, solve_hc
from .thermo import DosModel, entropy_gap, entropy_gap_fd, grand_potential_N, grand_potential_S, psi

__all__ = ["SweepSpec", "SweepResult", "SweepError", "run_sweep", "write_csv"]

OUTPUT_KINDS = ("hc_curve", "gap_surface", "psi_surface", "entropy_curve")

_HEADERS = {
    "hc_curve": ("T", "H_c"),
    "gap_surface": ("T", "H", "Y", "delta", "state"),
    "psi_surface": ("T", "H", "omega_S", "omega_N", "psi"),
    "entropy_curve": ("T", "H_c", "dS_formula", "dS_fd"),
}

_FAILURE_BUDGET = 0.10


class SweepError(NumericsError):
    """Too many per-point failures for the sweep to be meaningful."""


@dataclass(frozen=True)
class SweepSpec:
    """What to evaluate: T grid, H grid (or 'auto'), and output selection.

    ``H_grid = "auto"`` spans 0 to H_c(T) separately for every temperature
    column.  Grids are (min, max, n) with n >= 2 and min < max.
    """

    T_grid: tuple[float, float, int]
    H_grid: tuple[float, float, int] | str = "auto"
    outputs: frozenset[str] = frozenset({"hc_curve", "gap_surface"})

    def __post_init__(self) -> None:
        _check_grid("T_grid", self.T_grid)
        if isinstance(self.H_grid, str):
            if self.H_grid != "auto":
                raise ValueError(f"H_grid must be (min, max, n) or 'auto', got {self.H_grid!r}")
        else:
            _check_grid("H_grid", self.H_grid)
        unknown = set(self.outputs) - set(OUTPUT_KINDS)
        if unknown:
            raise ValueError(f"unknown outputs {sorted(unknown)}; expected subset of {OUTPUT_KINDS}")
        if not self.outputs:
            raise ValueError("outputs must not be empty")


def _check_grid(name: str, grid) -> None:
    if len(grid) != 3:
        raise ValueError(f"{name} must be (min, max, n)")
    lo, hi, n = grid
    if n < 2:
        raise ValueError(f"{name}: need n >= 2, got {n!r}")
    if not lo < hi:
        raise ValueError(f"{name}: need min < max, got ({lo!r}, {hi!r})")


@dataclass
class SweepResult:
    """Row-oriented sweep output, one list per requested table."""

    hc_curve: list[tuple] | None = None
    gap_surface: list[tuple] | None = None
    psi_surface: list[tuple] | None = None
    entropy_curve: list[tuple] | None = None
    failures: int = 0
    points: int = 0


def run_sweep(
    spec: SweepSpec,
    p: MaterialParams,
    dos: DosModel,
    dbox: DomainBox,
    quad: QuadSpec | None = None,
    root: RootSpec | None = None,
) -> SweepResult:
    """Evaluate the requested tables over the grids.

    Rows are emitted in grid order (T outer, H inner), independent of how
    the points are computed.  A failed point becomes a marker row (state
    ``ERR`` / NaN values) and counts toward the failure budget.
    """
    t_lo, t_hi, t_n = spec.T_grid
    if not 0 < t_lo:
        raise ValueError(f"T grid must be positive, got min {t_lo!r}")
    needs_hc = spec.outputs & {"hc_curve", "entropy_curve"} or spec.H_grid == "auto"
    if needs_hc and t_hi > dbox.tau1 * (1 + 1e-12):
        raise ValueError(
            f"T grid max {t_hi!r} exceeds tau1 = {dbox.tau1!r}; the critical "
            "field is only defined up to the transition temperature"
        )
    t_values = [float(t) for t in np.linspace(t_lo, t_hi, t_n)]
    result = SweepResult()
    failures = 0
    points = 0

    hc_cache: dict[float, float] = {}

    def hc_at(T: float) -> float:
        if T not in hc_cache:
            hc_cache[T] = solve_hc(T, p, dbox, root, quad)
        return hc_cache[T]

    if "hc_curve" in spec.outputs:
        rows = []
        for T in t_values:
            points += 1
            try:
                rows.append((T, hc_at(T)))
            except NumericsError:
                failures += 1
                rows.append((T, math.nan))
        result.hc_curve = rows

    if "entropy_curve" in spec.outputs:
        rows = []
        for T in t_values:
            points += 1
            try:
                rows.append((
                    T,
                    hc_at(T),
                    entropy_gap(T, p, dos, dbox, root, quad),
                    entropy_gap_fd(T, p, dos, dbox, root, quad),
                ))
            except NumericsError:
                failures += 1
                rows.append((T, math.nan, math.nan, math.nan))
        result.entropy_curve = rows

    wants_gap = "gap_surface" in spec.outputs
    wants_psi = "psi_surface" in spec.outputs
    if wants_gap or wants_psi:
        gap_rows: list[tuple] = []
        psi_rows: list[tuple] = []
        for T in t_values:
            if spec.H_grid == "auto":
                h_values = [float(h) for h in np.linspace(0.0, hc_at(T), spec_h_n(spec))]
            else:
                h_lo, h_hi, h_n = spec.H_grid
                h_values = [float(h) for h in np.linspace(h_lo, h_hi, h_n)]
            for H in h_values:
                points += 1
                try:
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore", DomainWarning)
                        gap = solve_gap_squared(T, H, p, dbox, root, quad)
                        if wants_gap:
                            state = "N" if gap.boundary else "S"
                            gap_rows.append((T, H, gap.Y, gap.delta, state))
                        if wants_psi:
                            omega_s = grand_potential_S(T, H, p, dos, gap, quad)
                            omega_n = (
                                omega_s if gap.Y == 0.0
                                else grand_potential_N(T, H, p, dos, quad)
                            )
                            psi_rows.append((T, H, omega_s, omega_n, omega_s - omega_n))
                except NumericsError:
                    failures += 1
                    if wants_gap:
                        gap_rows.append((T, H, math.nan, math.nan, "ERR"))
                    if wants_psi:
                        psi_rows.append((T, H, math.nan, math.nan, math.nan))
        if wants_gap:
            result.gap_surface = gap_rows
        if wants_psi:
            result.psi_surface = psi_rows

    result.failures = failures
    result.points = points
    if points and failures > _FAILURE_BUDGET * points:
        raise SweepError(
            f"{failures}/{points} grid points failed (> {_FAILURE_BUDGET:.0%} budget)"
        )
    return result


def spec_h_n(spec: SweepSpec) -> int:
    """Number of H points per column ('auto' reuses the T grid count)."""
    if spec.H_grid == "auto":
        return spec.T_grid[2]
    return spec.H_grid[2]


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def write_csv(result: SweepResult, prefix: str | Path) -> list[Path]:
    """Write each present table to ``<prefix>_{hc,gap,psi,entropy}.csv``.

    RFC-4180-style CSV with '.' decimal separator and 17 significant digits,
    which round-trips doubles exactly.  Returns the written paths.
    """
    prefix = Path(prefix)
    if prefix.parent != Path("") and not prefix.parent.exists():
        raise FileNotFoundError(f"output directory {prefix.parent} does not exist")
    suffixes = {
        "hc_curve": "hc",
        "gap_surface": "gap",
        "psi_surface": "psi",
        "entropy_curve": "entropy",
    }
    written: list[Path] = []
    for table, short in suffixes.items():
        rows = getattr(result, table)
        if rows is None:
            continue
        path = prefix.parent / f"{prefix.name}_{short}.csv"
        try:
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(_HEADERS[table])
                for row in rows:
                    writer.writerow([_fmt(v) for v in row])
        except OSError as exc:
            raise OSError(f"failed writing {path}: {exc}") from exc
        written.append(path)
    return written
