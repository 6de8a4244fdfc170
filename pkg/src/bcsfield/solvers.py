"""Implicit functions of the gap equation realized as monotone root finding.

Because F(T, H, Y) is strictly decreasing in each argument on the working
box, every quantity of interest is the unique root of F along one axis:

* ``solve_tau1``        -- zero-field transition temperature, root in T at
                           H = Y = 0;
* ``solve_hc``          -- critical field at temperature T, root in H at
                           Y = 0;
* ``solve_gap_squared`` -- squared gap f(T, H), root in Y;
* ``implicit_partials`` -- df/dT and df/dH by implicit differentiation;
* ``hc_slope_at_tc``    -- closed-form slope of the critical-field curve at
                           the transition temperature;
* ``build_curve``       -- sampled critical-field curve.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .kernel import F_eval, F_partials, StatePoint, fermi_delta
from .numerics import (
    BracketError,
    NumericsError,
    QuadSpec,
    RootBelowBracket,
    RootSpec,
    find_root_decreasing,
    integrate,
)
from .params import Z_CAP, DomainBox, MaterialParams, validate

__all__ = [
    "GapSolution",
    "CriticalFieldCurve",
    "DomainWarning",
    "SingularDerivativeError",
    "solve_tau1",
    "solve_gap_squared",
    "solve_hc",
    "implicit_partials",
    "hc_slope_at_tc",
    "build_curve",
]


class DomainWarning(UserWarning):
    """The requested state point lies outside the monotonicity guarantee zone.

    Results are still computed (the kernel is defined everywhere), but
    uniqueness and sign guarantees hold only for mu_B H / T <= Z_CAP and
    T >= T0.
    """


class SingularDerivativeError(NumericsError):
    """dF/dY vanished where an implicit derivative was requested."""


@dataclass(frozen=True)
class GapSolution:
    """Squared gap Y = f(T, H) = delta^2 at one state point.

    ``boundary`` is set when Y = 0 because F(T, H, 0) <= 0 (within the root
    tolerance): the point is in the normal state, at or beyond the critical
    field.  For boundary solutions the residual is F(T, H, 0) itself.
    """

    T: float
    H: float
    Y: float
    delta: float
    residual: float
    iterations: int
    boundary: bool


@dataclass(frozen=True)
class CriticalFieldCurve:
    """Sampled critical-field curve H_c(T) on [T0, tau1]."""

    tau1: float
    samples: list[tuple[float, float]]
    slope_at_tau1: float


_EXPANSION_LIMIT = 60


def solve_tau1(
    p: MaterialParams,
    spec: RootSpec | None = None,
    quad: QuadSpec | None = None,
) -> float:
    """Zero-field transition temperature: the root of F(T, 0, 0) in T.

    The bracket is grown geometrically (factor 2, at most 60 steps each way)
    from the weak-coupling scale ``hbar_omega_D * exp(-1/(2 U1))`` until the
    sign changes, then handed to the monotone root finder.

    Raises:
        NumericsError: if no sign change appears within the expansion budget
            (pathological parameters).
    """
    validate(p)
    spec = spec if spec is not None else RootSpec()

    def g(T: float) -> float:
        return F_eval(StatePoint(T, 0.0, 0.0), p, quad)

    seed = p.hbar_omega_D * math.exp(-0.5 / p.U1)
    hi = seed
    for _ in range(_EXPANSION_LIMIT):
        if g(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise NumericsError("tau1 bracket expansion failed upward: F stays positive")
    lo = min(seed, 0.5 * hi)
    for _ in range(_EXPANSION_LIMIT):
        if g(lo) > 0.0:
            break
        lo *= 0.5
    else:
        raise NumericsError("tau1 bracket expansion failed downward: F stays negative")
    try:
        result = find_root_decreasing(g, lo, hi, spec)
    except RootBelowBracket:
        # g(lo) landed within f_tol of zero: lo is the root.
        return lo
    return float(result.root)


def solve_gap_squared(
    T: float,
    H: float,
    p: MaterialParams,
    dbox: DomainBox,
    spec: RootSpec | None = None,
    quad: QuadSpec | None = None,
) -> GapSolution:
    """Squared gap Y = f(T, H): the unique root of F(T, H, .) on [0, Y0].

    If F(T, H, 0) <= 0 (within f_tol) the point is normal: the solution is
    Y = 0 with the boundary flag set.  Warns (but proceeds) outside the
    guarantee zone: mu_B H / T > Z_CAP or T < T0.
    """
    if not T > 0:
        raise ValueError(f"T must be > 0, got {T!r}")
    if H < 0:
        raise ValueError(f"H must be >= 0, got {H!r}")
    spec = spec if spec is not None else RootSpec()
    if p.mu_B * H / T > Z_CAP:
        warnings.warn(
            f"mu_B H / T = {p.mu_B * H / T:.4g} > {Z_CAP}: outside the "
            "monotonicity guarantee zone",
            DomainWarning,
            stacklevel=2,
        )
    if T < dbox.T0:
        warnings.warn(
            f"T = {T:.6g} below the box lower bound T0 = {dbox.T0:.6g}",
            DomainWarning,
            stacklevel=2,
        )

    def g(Y: float) -> float:
        return F_eval(StatePoint(T, H, Y), p, quad)

    try:
        result = find_root_decreasing(g, 0.0, dbox.Y0, spec)
    except RootBelowBracket as sig:
        return GapSolution(
            T=T, H=H, Y=0.0, delta=0.0, residual=float(sig.value), iterations=0,
            boundary=True,
        )
    # BracketError (F(T,H,Y0) > 0) propagates: the box corner check is
    # supposed to make that impossible, so it signals a corrupted box.
    y = float(result.root)
    return GapSolution(
        T=T, H=H, Y=y, delta=math.sqrt(y), residual=float(result.residual),
        iterations=result.iterations, boundary=False,
    )


def solve_hc(
    T: float,
    p: MaterialParams,
    dbox: DomainBox,
    spec: RootSpec | None = None,
    quad: QuadSpec | None = None,
) -> float:
    """Critical field H_c(T): the unique root of F(T, ., 0) on [0, H_max].

    Returns 0 at (and numerically beyond) the transition temperature, where
    F(T, 0, 0) <= 0 already.

    Raises:
        NumericsError: if F(T, H_max, 0) > 0, i.e. the critical field
            exceeds the domain cap; raise T0 to shrink the curve's range.
    """
    spec = spec if spec is not None else RootSpec()

    def g(H: float) -> float:
        return F_eval(StatePoint(T, H, 0.0), p, quad)

    try:
        result = find_root_decreasing(g, 0.0, dbox.H_max, spec)
    except RootBelowBracket:
        return 0.0
    except BracketError as exc:
        raise NumericsError(
            f"critical field exceeds domain cap H_max = {dbox.H_max:.6g} "
            f"at T = {T:.6g}; raise T0"
        ) from exc
    return float(result.root)


def implicit_partials(
    T: float,
    H: float,
    p: MaterialParams,
    dbox: DomainBox,
    spec: RootSpec | None = None,
    quad: QuadSpec | None = None,
    gap: GapSolution | None = None,
) -> tuple[float, float]:
    """Implicit derivatives (df/dT, df/dH) of the squared gap.

    Evaluates the kernel partials at (T, H, f(T, H)) -- including on the
    boundary, where f = 0 -- and returns (-F_T/F_Y, -F_H/F_Y).  Both are
    negative on the working box.  ``gap`` may pass a precomputed solution
    for the same (T, H) to skip one root solve.
    """
    if gap is None:
        gap = solve_gap_squared(T, H, p, dbox, spec, quad)
    f_T, f_H, f_Y = F_partials(StatePoint(T, H, gap.Y), p, quad)
    if f_Y == 0.0:
        raise SingularDerivativeError(
            f"dF/dY = 0 at (T={T!r}, H={H!r}, Y={gap.Y!r}): implicit "
            "derivatives undefined"
        )
    return -f_T / f_Y, -f_H / f_Y


def hc_slope_at_tc(
    p: MaterialParams,
    spec: RootSpec | None = None,
    quad: QuadSpec | None = None,
    tau1: float | None = None,
) -> float:
    """Closed-form slope dH_c/dT at the transition temperature.

        -(1 / (a tau1)) * [I de / (1 + cosh(xi/tau1))]
                        / [I (sinh(u)/u - 1) / (1 + cosh(u)) de],  u = xi/tau1,

    with the removable u -> 0 limit of the denominator integrand handled by
    its quadratic series.  Always negative; scales exactly as 1/a.
    """
    validate(p)
    if tau1 is None:
        tau1 = solve_tau1(p, spec, quad)
    w = p.hbar_omega_D

    def num_integrand(xi):
        return 2.0 * fermi_delta(np.asarray(xi) / tau1)

    def den_integrand(xi):
        u = np.asarray(xi, dtype=float) / tau1
        small = np.abs(u) < 1e-4
        u_safe = np.where(small, 1.0, u)
        direct = np.tanh(0.5 * u_safe) / u_safe - 2.0 * fermi_delta(u_safe)
        return np.where(small, u * u / 12.0, direct)

    num = integrate(num_integrand, -w, w, quad)
    den = integrate(den_integrand, -w, w, quad)
    return -num / (p.a * tau1 * den)


def build_curve(
    p: MaterialParams,
    dbox: DomainBox,
    n: int,
    spec: RootSpec | None = None,
    quad: QuadSpec | None = None,
) -> CriticalFieldCurve:
    """Sample H_c(T) on a uniform n-point grid over [T0, tau1].

    Points are independent solves (monotonicity makes warm starts
    unnecessary), so the samples may be computed in any order; they are
    returned ordered by T.
    """
    if n < 2:
        raise ValueError(f"need n >= 2 grid points, got {n!r}")
    grid = np.linspace(dbox.T0, dbox.tau1, n)
    samples = [(float(T), solve_hc(float(T), p, dbox, spec, quad)) for T in grid]
    slope = hc_slope_at_tc(p, spec, quad, tau1=dbox.tau1)
    return CriticalFieldCurve(tau1=dbox.tau1, samples=samples, slope_at_tau1=slope)
