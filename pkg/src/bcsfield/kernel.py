"""Gap-equation kernel: quasiparticle energy, thermal weight, F and its partials.

The central object is

    F(T, H, Y) = integral over [-hbar_omega_D, hbar_omega_D] of
                 J(T, H, Y, xi) d(xi)  -  1/U1,

    J = w(E) / E,   E = sqrt((xi + a H + b H^2)^2 + Y),

    w(E) = sinh(E/T) / (cosh(E/T) + cosh(mu_B H / T)).

The squared gap at a state point (T, H) is the root of F in Y; the critical
field at T is the root in H at Y = 0; the zero-field transition temperature
is the root in T at H = Y = 0.

Every function here is pure, accepts numpy arrays for the energy-like
argument, and is overflow-safe for arbitrarily small temperatures: large
arguments switch to Fermi-function / exponential forms, and the removable
singularities at E -> 0 get explicit limit branches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import QuadSpec, integrate
from .params import MaterialParams

__all__ = [
    "StatePoint",
    "fermi",
    "fermi_delta",
    "log1p_exp_neg",
    "quasiparticle_energy",
    "thermal_weight",
    "integrand_J",
    "F_eval",
    "F_partials",
]

# Above this value of E/T (or mu_B H / T) the sinh/cosh weight is evaluated
# in the two-Fermi-function form; e^30 already saturates the ratios to 1
# within ~1e-13, and the forms agree through the crossover band.
FERMI_FORM_CUT = 30.0

# E below 1e-8 * max(T, hbar_omega_D) takes the removable-limit branch of J.
SINGULAR_E_FRACTION = 1e-8

# E/T below which the Y-derivative of J switches to its cancellation-free
# series, and below which the T- and Zeeman-derivatives switch to their
# exact E -> 0 limits.
_Z_SERIES = 0.1
_Z_LIMIT = 1e-5


@dataclass(frozen=True)
class StatePoint:
    """One (temperature, field, squared gap) point."""

    T: float
    H: float
    Y: float

    def __post_init__(self) -> None:
        if not self.T > 0:
            raise ValueError(f"T must be > 0, got {self.T!r}")
        if self.H < 0:
            raise ValueError(f"H must be >= 0, got {self.H!r}")
        if self.Y < 0:
            raise ValueError(f"Y must be >= 0, got {self.Y!r}")


def fermi(x):
    """Fermi function 1 / (e^x + 1), overflow-safe for any real x."""
    x = np.asarray(x, dtype=float)
    t = np.exp(-np.abs(x))
    out = np.where(x >= 0, t / (1.0 + t), 1.0 / (1.0 + t))
    return float(out) if out.ndim == 0 else out


def fermi_delta(x):
    """Negative derivative of the Fermi function: 1 / (2 (cosh x + 1))."""
    x = np.asarray(x, dtype=float)
    t = np.exp(-np.abs(x))
    out = t / (1.0 + t) ** 2
    return float(out) if out.ndim == 0 else out


def log1p_exp_neg(x):
    """ln(1 + e^(-x)), overflow-safe for any real x."""
    x = np.asarray(x, dtype=float)
    out = np.maximum(-x, 0.0) + np.log1p(np.exp(-np.abs(x)))
    return float(out) if out.ndim == 0 else out


def _shift(H: float, p: MaterialParams) -> float:
    """Orbital energy shift a H + b H^2."""
    return p.a * H + p.b * H * H


def quasiparticle_energy(xi, H: float, Y: float, p: MaterialParams):
    """E = sqrt((xi + a H + b H^2)^2 + Y)."""
    eta = np.asarray(xi, dtype=float) + _shift(H, p)
    out = np.sqrt(eta * eta + Y)
    return float(out) if out.ndim == 0 else out


def _weight(z, z1: float):
    """sinh(z) / (cosh(z) + cosh(z1)) for z = E/T, z1 = mu_B H / T >= 0.

    Direct evaluation while both arguments stay below FERMI_FORM_CUT; the
    identity 1 - fermi(z + z1) - fermi(z - z1) beyond.  In the deep Zeeman
    tail z < z1 that identity is itself evaluated through the factored form

        e^(z - z1) (1 - e^(-2z)) / (1 + e^(-2 z1) + e^(z - z1) (1 + e^(-2z)))

    (every exponent <= 0), which keeps relative accuracy of the
    exponentially small weight instead of cancelling it away.  All branches
    are the same function; they only trade rounding behavior.
    """
    z = np.asarray(z, dtype=float)
    use_direct = (z <= FERMI_FORM_CUT) & (z1 <= FERMI_FORM_CUT)
    zc = np.minimum(z, FERMI_FORM_CUT)
    z1c = min(z1, FERMI_FORM_CUT)
    direct = np.sinh(zc) / (np.cosh(zc) + np.cosh(z1c))
    fermi_form = 1.0 - fermi(z + z1) - fermi(z - z1)
    ezz = np.exp(np.minimum(z - z1, 0.0))
    e2z = np.exp(-2.0 * z)
    tail = ezz * (1.0 - e2z) / (1.0 + np.exp(-2.0 * z1) + ezz * (1.0 + e2z))
    return np.where(use_direct, direct, np.where(z <= z1, tail, fermi_form))


def thermal_weight(T: float, E, H: float, p: MaterialParams):
    """Thermal pair-breaking weight sinh(E/T) / (cosh(E/T) + cosh(mu_B H/T)).

    Large arguments (E/T or mu_B H/T above FERMI_FORM_CUT) are evaluated in
    the algebraically identical, overflow-safe Fermi form
    ``1 - fermi((E + mu_B H)/T) - fermi((E - mu_B H)/T)``.
    The value lies in [0, 1).
    """
    if not T > 0:
        raise ValueError(f"T must be > 0, got {T!r}")
    E = np.asarray(E, dtype=float)
    out = _weight(E / T, p.mu_B * H / T)
    out = np.asarray(out)
    return float(out) if out.ndim == 0 else out


def integrand_J(T: float, H: float, Y: float, xi, p: MaterialParams):
    """J = thermal_weight(E) / E with the removable E -> 0 limit.

    Where E < SINGULAR_E_FRACTION * max(T, hbar_omega_D) the limit
    ``1 / (T (1 + cosh(mu_B H / T)))`` is returned instead of 0/0.
    """
    xi = np.asarray(xi, dtype=float)
    E = np.asarray(quasiparticle_energy(xi, H, Y, p))
    z1 = p.mu_B * H / T
    tiny = SINGULAR_E_FRACTION * max(T, p.hbar_omega_D)
    small = E < tiny
    E_safe = np.where(small, 1.0, E)
    out = np.where(small, 2.0 * fermi_delta(z1) / T, _weight(E_safe / T, z1) / E_safe)
    return float(out) if out.ndim == 0 else out


def F_eval(s: StatePoint, p: MaterialParams, quad: QuadSpec | None = None) -> float:
    """F(T, H, Y): the gap-equation excess over the pairing window.

    Integrates J over [-hbar_omega_D, hbar_omega_D] and subtracts 1/U1.
    Positive F means the state supports a larger gap; F = 0 is the
    gap equation itself.
    """
    w = p.hbar_omega_D
    val = integrate(lambda xi: integrand_J(s.T, s.H, s.Y, xi, p), -w, w, quad)
    return val - 1.0 / p.U1


def _r_pair(z, z1: float):
    """r(z + z1) and r(z - z1) with r(u) = 1/(1 + cosh u) = 2 fermi_delta(u)."""
    return 2.0 * fermi_delta(z + z1), 2.0 * fermi_delta(z - z1)


def _r_r_cosh(z, z1: float):
    """r(z + z1) * r(z - z1) * cosh(z1), factored to avoid overflow in cosh.

    The exponentials combine to exp(z1) * exp(-(z+z1)) * exp(-|z-z1|)
    = exp(-(z + |z - z1|)), which never exceeds 1.
    """
    z = np.asarray(z, dtype=float)
    ea = np.exp(-(z + z1))
    eb = np.exp(-np.abs(z - z1))
    e0 = np.exp(-(z + np.abs(z - z1)))
    return 2.0 * e0 * (1.0 + np.exp(-2.0 * z1)) / ((1.0 + ea) ** 2 * (1.0 + eb) ** 2)


def _dJ_dT(T: float, H: float, Y: float, xi, p: MaterialParams):
    """Pointwise dJ/dT.  Exact rewriting of
    -(1 + cosh z cosh z1 - z1 sinh z1 sinh(z)/z) / (T^2 (cosh z + cosh z1)^2)
    in terms of r(u) = 1/(1 + cosh u), which stays bounded for any argument.
    """
    xi = np.asarray(xi, dtype=float)
    E = np.asarray(quasiparticle_energy(xi, H, Y, p))
    z = E / T
    z1 = p.mu_B * H / T
    rp, rm = _r_pair(z, z1)
    r1 = 2.0 * fermi_delta(z1)

    z_safe = np.where(z > _Z_LIMIT, z, 1.0)
    bracket = (
        rp * rm
        + 0.5 * ((1.0 - rp) * rm + (1.0 - rm) * rp)
        - (z1 / z_safe) * 0.5 * (rm - rp)
    )
    limit = r1 * (1.0 - z1 * np.tanh(0.5 * z1))
    out = -np.where(z > _Z_LIMIT, bracket, limit) / (T * T)
    return float(out) if out.ndim == 0 else out


def _dJ_dY(T: float, H: float, Y: float, xi, p: MaterialParams):
    """Pointwise dJ/dY = (r(z+z1) + r(z-z1)) / (4 T E^2) - w / (2 E^3).

    The two terms cancel to O(E^3) as E -> 0, so below z = E/T = 0.1 the
    equivalent series form
    -(A(z) r(z+z1) r(z-z1) - B(z) r r cosh(z1)) / (2 T^3) is used, whose
    coefficients come from the Taylor expansion of
    cosh(z1)(sinh z - z cosh z) + sinh z cosh z - z over z^3.
    """
    xi = np.asarray(xi, dtype=float)
    E = np.asarray(quasiparticle_energy(xi, H, Y, p))
    z = E / T
    z1 = p.mu_B * H / T
    rp, rm = _r_pair(z, z1)

    big = z >= _Z_SERIES
    E_safe = np.where(big, E, 1.0)
    w = np.asarray(_weight(np.where(big, z, 1.0), z1))
    direct = (rp + rm) / (4.0 * T * E_safe * E_safe) - w / (2.0 * E_safe**3)

    z2 = z * z
    series_a = 2.0 / 3.0 + z2 * (2.0 / 15.0 + z2 * (4.0 / 315.0 + z2 * (2.0 / 2835.0)))
    series_b = 1.0 / 3.0 + z2 * (1.0 / 30.0 + z2 * (1.0 / 840.0 + z2 * (1.0 / 45360.0)))
    series = -(series_a * rp * rm - series_b * _r_r_cosh(z, z1)) / (2.0 * T**3)

    out = np.where(big, direct, series)
    return float(out) if out.ndim == 0 else out


def _dJ_dh(T: float, H: float, Y: float, xi, p: MaterialParams):
    """Pointwise dJ/d(mu_B H) = (r(z+z1) - r(z-z1)) / (2 T E)."""
    xi = np.asarray(xi, dtype=float)
    E = np.asarray(quasiparticle_energy(xi, H, Y, p))
    z = E / T
    z1 = p.mu_B * H / T
    rp, rm = _r_pair(z, z1)
    E_safe = np.where(z > _Z_LIMIT, E, 1.0)
    direct = (rp - rm) / (2.0 * T * E_safe)
    limit = -np.tanh(0.5 * z1) * 2.0 * fermi_delta(z1) / (T * T)
    out = np.where(z > _Z_LIMIT, direct, limit)
    return float(out) if out.ndim == 0 else out


def _dJ_dH(T: float, H: float, Y: float, xi, p: MaterialParams):
    """Pointwise dJ/dH at fixed (T, Y): orbital shift channel plus Zeeman."""
    xi = np.asarray(xi, dtype=float)
    eta = xi + _shift(H, p)
    orbital = 2.0 * eta * (p.a + 2.0 * p.b * H) * np.asarray(_dJ_dY(T, H, Y, xi, p))
    zeeman = p.mu_B * np.asarray(_dJ_dh(T, H, Y, xi, p))
    out = orbital + zeeman
    return float(out) if out.ndim == 0 else out


def F_partials(
    s: StatePoint, p: MaterialParams, quad: QuadSpec | None = None
) -> tuple[float, float, float]:
    """Analytic partial derivatives (F_T, F_H, F_Y).

    Each integrand is differentiated under the integral sign and integrated
    with the same adaptive rule as F itself.  At Y = 0 the returned
    Y-derivative is the one-sided limit (J is analytic in Y, so it equals
    the interior value).  On the working box all three are negative, which
    is what makes the implicit functions unique and monotone.
    """
    w = p.hbar_omega_D
    f_T = integrate(lambda xi: _dJ_dT(s.T, s.H, s.Y, xi, p), -w, w, quad)
    f_H = integrate(lambda xi: _dJ_dH(s.T, s.H, s.Y, xi, p), -w, w, quad)
    f_Y = integrate(lambda xi: _dJ_dY(s.T, s.H, s.Y, xi, p), -w, w, quad)
    return f_T, f_H, f_Y
