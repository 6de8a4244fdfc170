"""Grand potentials over spin-split windows, their difference, and the entropy gap.

The grand potential is evaluated as two integrals over the spin-shifted
windows

    I_up = [-w - s - h, w - s - h],      I_dn = [-w - s + h, w - s + h],

with w the Debye energy, s = a H + b H^2 the orbital shift and h = mu_B H
the Zeeman energy.  The gap entering the brackets is the xi-independent
constant solved on the symmetric window; the windows themselves keep their
physical shifts.  That window mismatch is exactly what makes the entropy
gap nonzero for a non-constant density of states, and with it the phase
transition first order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .kernel import fermi, log1p_exp_neg
from .numerics import QuadSpec, RootSpec, integrate
from .params import DomainBox, MaterialParams
from .solvers import (
    DomainWarning,
    GapSolution,
    implicit_partials,
    solve_gap_squared,
    solve_hc,
)

__all__ = [
    "DosModel",
    "ThermoPoint",
    "dos_constant",
    "dos_linear",
    "dos_sqrt",
    "dos_tabulated",
    "load_dos_table",
    "dos_eval",
    "grand_potential_S",
    "grand_potential_N",
    "psi",
    "entropy_gap",
    "entropy_gap_fd",
]

DOS_KINDS = ("constant", "linear", "sqrt", "tabulated")


@dataclass(frozen=True, eq=False)
class DosModel:
    """Density of states D(eps).

    kind: one of ``constant``, ``linear``, ``sqrt``, ``tabulated``.
    D0: overall scale (value at eps = mu for the analytic kinds).
    slope_param: relative slope per Debye energy (linear kind only).
    table: (eps, D) arrays, strictly increasing eps (tabulated kind only).
    monotone_increasing: whether D grows with eps; a strictly increasing
        DOS is what produces a negative entropy gap.
    """

    kind: str
    D0: float = 1.0
    slope_param: float = 0.0
    table: tuple[np.ndarray, np.ndarray] | None = None
    monotone_increasing: bool = False

    def __post_init__(self) -> None:
        if self.kind not in DOS_KINDS:
            raise ValueError(f"unknown DOS kind {self.kind!r}; expected one of {DOS_KINDS}")
        if not self.D0 > 0:
            raise ValueError(f"D0 must be > 0, got {self.D0!r}")


def dos_constant(D0: float = 1.0) -> DosModel:
    """Flat density of states (entropy gap vanishes identically)."""
    return DosModel(kind="constant", D0=D0, monotone_increasing=False)


def dos_linear(D0: float = 1.0, slope_param: float = 0.5) -> DosModel:
    """D(eps) = D0 (1 + slope_param (eps - mu) / hbar_omega_D)."""
    return DosModel(
        kind="linear", D0=D0, slope_param=slope_param,
        monotone_increasing=slope_param > 0,
    )


def dos_sqrt(D0: float = 1.0) -> DosModel:
    """Free-electron D(eps) = D0 sqrt(eps / mu); requires eps > 0."""
    return DosModel(kind="sqrt", D0=D0, monotone_increasing=True)


def dos_tabulated(eps: np.ndarray, dens: np.ndarray) -> DosModel:
    """Tabulated DOS with linear interpolation; eps strictly increasing."""
    eps = np.asarray(eps, dtype=float)
    dens = np.asarray(dens, dtype=float)
    if eps.ndim != 1 or eps.shape != dens.shape or eps.size < 2:
        raise ValueError("tabulated DOS needs two equal-length 1-d columns (>= 2 rows)")
    if not np.all(np.diff(eps) > 0):
        raise ValueError("tabulated DOS abscissas must be strictly increasing")
    if np.any(dens < 0):
        raise ValueError("tabulated DOS must be nonnegative")
    increasing = bool(np.all(np.diff(dens) >= 0) and dens[-1] > dens[0])
    return DosModel(
        kind="tabulated", D0=float(dens.max()), table=(eps, dens),
        monotone_increasing=increasing,
    )


def load_dos_table(path: str | Path) -> DosModel:
    """Load a two-column whitespace-separated (eps, D) text file."""
    data = np.loadtxt(path, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"{path}: expected two whitespace-separated columns")
    return dos_tabulated(data[:, 0], data[:, 1])


def dos_eval(dos: DosModel, eps, p: MaterialParams):
    """Evaluate D(eps); raises outside the model's support."""
    eps = np.asarray(eps, dtype=float)
    if dos.kind == "constant":
        out = np.full_like(eps, dos.D0)
    elif dos.kind == "linear":
        out = dos.D0 * (1.0 + dos.slope_param * (eps - p.mu) / p.hbar_omega_D)
        if np.any(out < 0):
            raise ValueError("linear DOS went negative on the requested range")
    elif dos.kind == "sqrt":
        if np.any(eps <= 0):
            raise ValueError("sqrt DOS requires eps > 0")
        out = dos.D0 * np.sqrt(eps / p.mu)
    else:
        tab_eps, tab_d = dos.table
        if np.any(eps < tab_eps[0]) or np.any(eps > tab_eps[-1]):
            raise ValueError(
                f"tabulated DOS queried outside its range "
                f"[{tab_eps[0]!r}, {tab_eps[-1]!r}]"
            )
        out = np.interp(eps, tab_eps, tab_d)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ThermoPoint:
    """Grand potentials and their difference at one (T, H) point."""

    T: float
    H: float
    omega_S: float
    omega_N: float
    psi: float
    gap: GapSolution | None = field(repr=False, compare=False, default=None)


def _bracket_up(xi, T: float, Y: float, s: float, h: float):
    """Spin-up grand-potential bracket at squared gap Y."""
    eta = np.asarray(xi, dtype=float) + s
    beta = 1.0 / T
    if Y == 0.0:
        E = np.abs(eta)
        core = eta - E
    else:
        E = np.sqrt(eta * eta + Y)
        core = eta - eta * eta / E - (Y / E) * fermi(beta * (E + h))
    return core - 2.0 * T * log1p_exp_neg(beta * (E + h))


def _bracket_dn(xi, T: float, Y: float, s: float, h: float):
    """Spin-down grand-potential bracket at squared gap Y."""
    eta = np.asarray(xi, dtype=float) + s
    beta = 1.0 / T
    if Y == 0.0:
        E = np.abs(eta)
        core = eta - E
    else:
        E = np.sqrt(eta * eta + Y)
        core = eta - (eta * eta + 2.0 * Y) / E + (Y / E) * fermi(-beta * (E - h))
    return core - 2.0 * T * log1p_exp_neg(beta * (E - h))


def _integrate_split(f, lo: float, hi: float, split: float, quad: QuadSpec | None) -> float:
    """Integrate f over [lo, hi], splitting at one interior point if present.

    The brackets have a kink (Y = 0) or a sharp peak (Y > 0) at xi = -s;
    splitting there keeps every panel analytic.
    """
    if lo < split < hi:
        return integrate(f, lo, split, quad) + integrate(f, split, hi, quad)
    return integrate(f, lo, hi, quad)


def _omega(T: float, H: float, Y: float, p: MaterialParams, dos: DosModel,
           quad: QuadSpec | None) -> float:
    s = p.a * H + p.b * H * H
    h = p.mu_B * H
    w = p.hbar_omega_D

    def up(xi):
        return dos_eval(dos, np.asarray(xi) + p.mu, p) * _bracket_up(xi, T, Y, s, h)

    def dn(xi):
        return dos_eval(dos, np.asarray(xi) + p.mu, p) * _bracket_dn(xi, T, Y, s, h)

    val_up = _integrate_split(up, -w - s - h, w - s - h, -s, quad)
    val_dn = _integrate_split(dn, -w - s + h, w - s + h, -s, quad)
    return 0.5 * (val_up + val_dn)


def grand_potential_S(
    T: float,
    H: float,
    p: MaterialParams,
    dos: DosModel,
    gap: GapSolution,
    quad: QuadSpec | None = None,
) -> float:
    """Superconducting grand potential at a solved gap.

    With a zero gap this is the identical code path as
    :func:`grand_potential_N`, so the two agree exactly there.
    """
    return _omega(T, H, gap.Y, p, dos, quad)


def grand_potential_N(
    T: float,
    H: float,
    p: MaterialParams,
    dos: DosModel,
    quad: QuadSpec | None = None,
) -> float:
    """Normal-state grand potential: the same expression with the gap forced to 0."""
    return _omega(T, H, 0.0, p, dos, quad)


def psi(
    T: float,
    H: float,
    p: MaterialParams,
    dos: DosModel,
    dbox: DomainBox,
    spec: RootSpec | None = None,
    quad: QuadSpec | None = None,
) -> ThermoPoint:
    """Solve the gap at (T, H) and return both potentials and their difference.

    The difference vanishes on the critical curve (the gap is zero there and
    both potentials evaluate through the same path) and is negative inside
    the superconducting region.
    """
    gap = solve_gap_squared(T, H, p, dbox, spec, quad)
    omega_s = grand_potential_S(T, H, p, dos, gap, quad)
    omega_n = omega_s if gap.Y == 0.0 else grand_potential_N(T, H, p, dos, quad)
    return ThermoPoint(T=T, H=H, omega_S=omega_s, omega_N=omega_n,
                       psi=omega_s - omega_n, gap=gap)


def entropy_gap(
    T: float,
    p: MaterialParams,
    dos: DosModel,
    dbox: DomainBox,
    spec: RootSpec | None = None,
    quad: QuadSpec | None = None,
) -> float:
    """Entropy jump across the transition at (T, H_c(T)), closed form.

        dS = -(1/4) df/dT (T, H_c) * [ int_{I1} D(xi+mu)/|xi+s| dxi
                                     - int_{I2} D(xi+mu)/|xi+s| dxi ],

    where I1 and I2 are the width-2h slivers at the lower and upper edges of
    the spin-split windows (centers -w - s and +w - s, half-width h = mu_B
    H_c).  For a constant DOS the two integrals cancel exactly; for an
    increasing DOS the brace is negative and so is dS, making the transition
    first order.  At T = tau1 the slivers are empty and dS = 0.
    """
    hc = solve_hc(T, p, dbox, spec, quad)
    df_dT, _ = implicit_partials(T, hc, p, dbox, spec, quad)
    s = p.a * hc + p.b * hc * hc
    h = p.mu_B * hc
    w = p.hbar_omega_D

    def edge_weight(xi):
        xi = np.asarray(xi, dtype=float)
        return dos_eval(dos, xi + p.mu, p) / np.abs(xi + s)

    brace = integrate(edge_weight, -w - s - h, -w - s + h, quad) - integrate(
        edge_weight, w - s - h, w - s + h, quad
    )
    return -0.25 * df_dT * brace


_FD_QUAD = QuadSpec(abs_tol=1e-13, rel_tol=1e-13, max_depth=50)


def entropy_gap_fd(
    T: float,
    p: MaterialParams,
    dos: DosModel,
    dbox: DomainBox,
    spec: RootSpec | None = None,
    quad: QuadSpec | None = None,
    delta_T: float | None = None,
) -> float:
    """Entropy jump as a one-sided finite difference of the potential gap.

    Approaches (T, H_c(T)) from inside the superconducting region along
    fixed H = H_c(T): dS = -dPsi/dT estimated from steps delta_T and
    delta_T/2 with Richardson extrapolation.  Independent cross-check of
    :func:`entropy_gap`; the two must agree when the closed form is right.

    When T sits at the box lower bound the probe dips just below T0; that
    is deliberate, so the below-T0 warning is suppressed for the probes.
    """
    if delta_T is None:
        delta_T = 2e-3 * T
    if not 0 < delta_T < T:
        raise ValueError(f"delta_T must be in (0, T), got {delta_T!r}")
    if quad is None:
        quad = _FD_QUAD
    hc = solve_hc(T, p, dbox, spec, quad)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DomainWarning)
        psi_0 = psi(T, hc, p, dos, dbox, spec, quad).psi
        psi_1 = psi(T - delta_T, hc, p, dos, dbox, spec, quad).psi
        psi_2 = psi(T - 0.5 * delta_T, hc, p, dos, dbox, spec, quad).psi
    fd_full = (psi_1 - psi_0) / delta_T
    fd_half = (psi_2 - psi_0) / (0.5 * delta_T)
    return 2.0 * fd_half - fd_full
