"""Adaptive quadrature, monotone bracketed root finding, and finite differences.

This is the shared numerical machinery used by every solver in the package.
Design goals, in order: correctness with controlled error, determinism
(identical inputs give bit-identical results), and no evaluation outside the
caller's bracket / interval.

All integrands passed to :func:`integrate` must be vectorized: they receive a
one-dimensional ``numpy`` array of abscissas and must return an array of the
same shape.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadSpec",
    "RootSpec",
    "RootResult",
    "NumericsError",
    "QuadratureError",
    "BracketError",
    "RootBelowBracket",
    "integrate",
    "find_root_decreasing",
    "central_diff",
]


class NumericsError(Exception):
    """Base class for failures of the numerical layer."""


class QuadratureError(NumericsError):
    """Adaptive subdivision hit its depth limit before reaching tolerance.

    Attributes carry the worst (deepest unconverged) panel so callers can
    report where the integrand resisted integration.
    """

    def __init__(self, message: str, panel_lo: float, panel_hi: float, panel_err: float):
        super().__init__(message)
        self.panel_lo = panel_lo
        self.panel_hi = panel_hi
        self.panel_err = panel_err


class BracketError(NumericsError):
    """No sign change in the bracket: g(hi) is still positive."""


class RootBelowBracket(NumericsError):
    """Signal: the root lies at or below the lower bracket endpoint.

    Raised when g(lo) <= f_tol for a decreasing g.  This is a control-flow
    signal, not a failure: callers map it to their boundary cases (a gap that
    is identically zero, a critical field of zero).
    """

    def __init__(self, lo: float, value: float):
        super().__init__(f"root at or below lo={lo!r} (g(lo)={value!r})")
        self.lo = lo
        self.value = value


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and depth limit for adaptive quadrature.

    The returned estimate satisfies
    ``error <= max(abs_tol, rel_tol * |estimate|)`` whenever the integrator
    returns without raising.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 50

    def __post_init__(self) -> None:
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("quadrature tolerances must be > 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


@dataclass(frozen=True)
class RootSpec:
    """Tolerances for bracketed root finding.

    ``x_tol`` is an absolute width; callers working far from unit scale
    should set it to 1e-12 times their natural scale.
    """

    x_tol: float = 1e-12
    f_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self) -> None:
        if self.x_tol <= 0 or self.f_tol <= 0:
            raise ValueError("root tolerances must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class RootResult:
    """A bracketed root together with its convergence diagnostics."""

    root: float
    residual: float
    iterations: int


DEFAULT_QUAD = QuadSpec()
DEFAULT_ROOT = RootSpec()


# 15-point Kronrod extension of 7-point Gauss on [-1, 1].  Standard
# double-precision nodes/weights; the embedded Gauss rule shares the odd
# nodes, so one evaluation sweep yields both estimates.
_XGK_HALF = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
)
_WGK_HALF = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
)
_WGK_CENTER = 0.209482141084727828012999174891714
_WG_HALF = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
)
_WG_CENTER = 0.417959183673469387755102040816327

_XGK = np.array([-x for x in _XGK_HALF] + [0.0] + list(reversed(_XGK_HALF)))
_WGK = np.array(list(_WGK_HALF) + [_WGK_CENTER] + list(reversed(_WGK_HALF)))
# Gauss points sit at the odd Kronrod indices (1, 3, ..., 13).
_WG = np.array(list(_WG_HALF) + [_WG_CENTER] + list(reversed(_WG_HALF)))


def _gk15(f: Callable, lo: float, hi: float) -> tuple[float, float]:
    """One Gauss-Kronrod 7/15 panel: returns (estimate, error bound)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fx = np.asarray(f(mid + half * _XGK), dtype=float)
    kronrod = half * float(_WGK @ fx)
    gauss = half * float(_WG @ fx[1::2])
    return kronrod, abs(kronrod - gauss)


def _adapt(f: Callable, lo: float, hi: float, tol: float, depth: int, spec: QuadSpec) -> float:
    est, err = _gk15(f, lo, hi)
    if err <= tol:
        return est
    if depth >= spec.max_depth:
        raise QuadratureError(
            f"quadrature did not converge on [{lo!r}, {hi!r}] "
            f"(panel error {err:.3e} > {tol:.3e} at depth {depth})",
            panel_lo=lo,
            panel_hi=hi,
            panel_err=err,
        )
    mid = 0.5 * (lo + hi)
    return (
        _adapt(f, lo, mid, 0.5 * tol, depth + 1, spec)
        + _adapt(f, mid, hi, 0.5 * tol, depth + 1, spec)
    )


def integrate(f: Callable, lo: float, hi: float, spec: QuadSpec | None = None) -> float:
    """Integrate a vectorized real function over [lo, hi].

    Adaptive Gauss-Kronrod bisection: each panel carries an embedded error
    estimate, and a panel is split until its share of the global tolerance is
    met.  The recursion is pure (left before right, fixed tolerance split),
    so the result does not depend on evaluation scheduling.

    Args:
        f: Vectorized integrand; called with ``numpy`` arrays of abscissas.
        lo, hi: Integration bounds, ``lo <= hi``.
        spec: Tolerances; defaults to ``QuadSpec()``.

    Returns:
        The integral estimate, accurate to
        ``max(abs_tol, rel_tol * |estimate|)``.

    Raises:
        QuadratureError: if max_depth is reached with the tolerance unmet.
        ValueError: if lo > hi.
    """
    if spec is None:
        spec = DEFAULT_QUAD
    if lo > hi:
        raise ValueError(f"integrate requires lo <= hi, got [{lo!r}, {hi!r}]")
    if lo == hi:
        return 0.0
    rough, err = _gk15(f, lo, hi)
    tol = max(spec.abs_tol, spec.rel_tol * abs(rough))
    if err <= tol:
        return rough
    return _adapt(f, lo, hi, tol, 0, spec)


def find_root_decreasing(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    spec: RootSpec | None = None,
) -> RootResult:
    """Find the root of a decreasing function g on [lo, hi].

    Both endpoints are evaluated up front; nothing is assumed.  The bracket
    always retains a sign change, and g is never evaluated outside [lo, hi].
    Iteration uses secant (Illinois-damped false position) steps with a
    bisection step every fourth iteration as a worst-case guarantee.

    Returns:
        RootResult with ``|residual| <= f_tol`` or a final bracket width
        ``<= x_tol``.

    Raises:
        RootBelowBracket: if ``g(lo) <= f_tol`` -- the root sits at or below
            the lower endpoint (within tolerance).  Callers map this to their
            boundary cases.
        BracketError: if ``g(hi) > f_tol`` -- no root in the bracket.
        NumericsError: if max_iter is exhausted (should not happen for a
            bracketed method with sane tolerances).
    """
    if spec is None:
        spec = DEFAULT_ROOT
    if not hi > lo:
        raise ValueError(f"find_root_decreasing requires hi > lo, got [{lo!r}, {hi!r}]")
    g_lo = g(lo)
    if g_lo <= spec.f_tol:
        raise RootBelowBracket(lo, g_lo)
    g_hi = g(hi)
    if g_hi > spec.f_tol:
        raise BracketError(
            f"no root in bracket: g({hi!r}) = {g_hi!r} > 0 for a decreasing function"
        )
    if g_hi > 0.0:
        # Within f_tol of a root at the upper endpoint.
        return RootResult(hi, g_hi, 0)

    a, fa = lo, g_lo
    b, fb = hi, g_hi
    side = 0  # +1 / -1: which endpoint the last update replaced (Illinois damping)
    for it in range(1, spec.max_iter + 1):
        if it % 4 == 0:
            x = 0.5 * (a + b)
        else:
            x = b - fb * (b - a) / (fb - fa)
            if not a < x < b:
                x = 0.5 * (a + b)
        fx = g(x)
        if abs(fx) <= spec.f_tol:
            return RootResult(x, fx, it)
        if fx > 0.0:
            a, fa = x, fx
            if side == +1:
                fb *= 0.5
            side = +1
        else:
            b, fb = x, fx
            if side == -1:
                fa *= 0.5
            side = -1
        if b - a <= spec.x_tol:
            return RootResult(x, fx, it)
    raise NumericsError(
        f"root iteration limit ({spec.max_iter}) exhausted; bracket [{a!r}, {b!r}]"
    )


def central_diff(f: Callable[[float], float], x: float, h: float) -> float:
    """Second-order central difference (f(x+h) - f(x-h)) / (2h)."""
    if h <= 0:
        raise ValueError("central_diff requires h > 0")
    return (f(x + h) - f(x - h)) / (2.0 * h)
