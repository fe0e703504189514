"""
Plane-wave first-Born amplitudes and standard cross sections.

For a central field the amplitude reduces to the radial sine transform

    f(q) = -(2 m / q) int_0^inf U(r) r sin(q r) dr,
    f(0) = -2 m int_0^inf U(r) r^2 dr.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .model import CustomRadial, GaussianWell, HydrogenGround, Potential, radial_potential
from .quadrature import QuadratureResult, integrate_1d

__all__ = [
    "born_gaussian",
    "born_hydrogen",
    "born_numeric",
    "sigma_standard",
    "amplitude_function",
    "tabulate_amplitude",
]

# q r_cut below which the moment integral replaces sin(qr)/q
_SMALL_QR = 1e-6


def born_gaussian(q, v: float, a: float, mass: float = 1.0):
    """f(q) = f0 exp(-(q a)^2) with f0 = -4 sqrt(pi) m V a^3."""
    f0 = -4.0 * math.sqrt(math.pi) * mass * v * a**3
    q = np.asarray(q, dtype=float)
    out = f0 * np.exp(-((q * a) ** 2))
    return float(out) if out.ndim == 0 else out


def born_hydrogen(q, a: float):
    """Hydrogen ground-state amplitude (a/2) [1/z + 1/z^2], z = 1 + (q a / 2)^2."""
    q = np.asarray(q, dtype=float)
    z = 1.0 + (0.5 * q * a) ** 2
    out = 0.5 * a * (1.0 / z + 1.0 / (z * z))
    return float(out) if out.ndim == 0 else out


def born_numeric(
    potential: Potential, q: float, mass: float = 1.0, tol: float = 1e-10
) -> QuadratureResult:
    """Numeric radial Born integral for any central potential.

    The interval [0, r_cut] is partitioned at the zeros of sin(qr) so every
    piece is non-oscillatory; pieces are refined together and summed with
    compensation. Non-convergence is reported, not hidden.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    q = abs(float(q))
    u, r_cut = radial_potential(potential, mass)
    probe = np.linspace(r_cut / 512, r_cut, 512)
    scale = float(np.max(np.abs(u(probe) * probe**2))) * r_cut
    abs_tol = max(tol * 1e-6 * scale, 1e-300)
    if q * r_cut < _SMALL_QR:
        res = integrate_1d(lambda r: u(r) * r * r, 0.0, r_cut, abs_tol, tol)
        factor = -2.0 * mass
    else:
        n_zero = int(q * r_cut / math.pi)
        points = [k * math.pi / q for k in range(1, n_zero + 1)]
        res = integrate_1d(
            lambda r: u(r) * r * np.sin(q * r), 0.0, r_cut, abs_tol / q, tol,
            max_evals=max(100_000, 60 * (n_zero + 1)), points=points,
        )
        factor = -2.0 * mass / q
    return QuadratureResult(
        factor * res.value, abs(factor) * res.error_estimate, res.evaluations, res.converged
    )


def tabulate_amplitude(
    potential: Potential, mass: float = 1.0, q_max: float = 60.0, n: int = 600, tol: float = 1e-11
) -> Callable:
    """Cubic-spline table of the numeric amplitude on [0, q_max].

    Arguments beyond ``q_max`` fall back to direct quadrature.
    """
    grid = np.linspace(0.0, q_max, n)
    values = np.array([born_numeric(potential, q, mass, tol).value for q in grid])
    spline = CubicSpline(grid, values, bc_type=((1, 0.0), "not-a-knot"))

    def f(q):
        q = np.abs(np.asarray(q, dtype=float))
        out = spline(np.minimum(q, q_max))
        far = q > q_max
        if np.any(far):
            out = np.array(out)
            out[far] = [born_numeric(potential, x, mass, tol).value for x in q[far]]
        return out

    return f


def amplitude_function(potential: Potential, mass: float = 1.0) -> Callable:
    """Vectorized map |q| -> f(q) used by the packet convolutions."""
    if isinstance(potential, GaussianWell):
        v, a = potential.v, potential.a
        return lambda q: born_gaussian(q, v, a, mass)
    if isinstance(potential, HydrogenGround):
        a = potential.a
        return lambda q: born_hydrogen(q, a)
    if isinstance(potential, CustomRadial):
        return tabulate_amplitude(potential, mass)
    raise TypeError(f"unsupported potential {type(potential).__name__}")


def sigma_standard(
    potential: Potential, p_i: float, tol: float = 1e-10, mass: float = 1.0
) -> QuadratureResult:
    """Total plane-wave cross section, int |f(q(theta))|^2 dOmega.

    Integrated over u = 1 - cos(theta) in [0, 2] with q^2 = 2 p_i^2 u.
    """
    if not p_i > 0:
        raise ValueError("p_i must be positive")
    if isinstance(potential, CustomRadial):
        amp = np.vectorize(lambda q: born_numeric(potential, q, mass, tol * 0.1).value)
    else:
        amp = amplitude_function(potential, mass)
    from .model import potential_range

    a = potential_range(potential)
    u_peak = 1.0 / (p_i * a) ** 2
    points = [u_peak * 10.0**k for k in range(-2, 4) if u_peak * 10.0**k < 2.0]

    def integrand(u):
        f = amp(p_i * np.sqrt(2.0 * u))
        return 2.0 * math.pi * np.abs(f) ** 2

    return integrate_1d(integrand, 0.0, 2.0, abs_tol=1e-300, rel_tol=tol, points=points)
