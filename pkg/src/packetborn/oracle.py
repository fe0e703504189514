"""
Fixed-grid brute-force evaluators used to certify the fast paths.

Nothing here touches :mod:`packetborn.quadrature`: every integral is a plain
weighted sum on a polar grid (midpoint in radius, trapezoid in angle), so it
fails in different ways than the adaptive engine. Slow by design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import Kinematics, PacketSpec
from .packet import luminosity, profile

__all__ = [
    "GridSpec",
    "polar_grid",
    "brute_F",
    "brute_events",
    "brute_avg",
    "brute_impact_average",
    "brute_psi",
    "brute_total_events_ratio",
]


@dataclass(frozen=True)
class GridSpec:
    """Polar k-grid. ``extrapolate`` combines n_radial and 2 n_radial
    midpoint sums (Richardson), lifting the radial rule to fourth order."""

    n_radial: int = 256
    n_angular: int = 256
    k_max: float | None = None
    extrapolate: bool = False

    def __post_init__(self):
        if self.n_radial < 16 or self.n_angular < 16:
            raise ValueError("GridSpec needs at least 16 points per axis")
        if self.k_max is not None and not self.k_max > 0:
            raise ValueError("k_max must be positive")

    def cutoff(self, packet: PacketSpec, kin: Kinematics) -> float:
        if self.k_max is not None:
            return self.k_max
        return 8.0 / packet.sigma_perp + kin.q_abs


def polar_grid(n_radial: int, n_angular: int, r_max: float):
    """Nodes (x, y) and weights of the midpoint x trapezoid polar rule."""
    h = r_max / n_radial
    r = (np.arange(n_radial) + 0.5) * h
    t = 2.0 * math.pi * np.arange(n_angular) / n_angular
    x = r[:, None] * np.cos(t)[None, :]
    y = r[:, None] * np.sin(t)[None, :]
    w = np.broadcast_to((r * h * 2.0 * math.pi / n_angular)[:, None], x.shape)
    return x, y, w


def _weighted_sum(values, weights):
    # pairwise summation on each row, then across rows
    return np.sum(np.sum(values * weights, axis=1))


def _richardson(fn, grid):
    coarse = fn(grid.n_radial)
    if not grid.extrapolate:
        return coarse
    return (4.0 * fn(2 * grid.n_radial) - coarse) / 3.0


def brute_F(kin: Kinematics, packet: PacketSpec, amplitude: Callable, grid: GridSpec = GridSpec()) -> complex:
    """Packet amplitude F(Q) on a fixed polar grid in k_perp."""
    return _richardson(lambda n: _brute_F(kin, packet, amplitude, n, grid), grid)


def _brute_F(kin, packet, amplitude, n_radial, grid):
    x, y, w = polar_grid(n_radial, grid.n_angular, grid.cutoff(packet, kin))
    q = np.sqrt((kin.q_x - x) ** 2 + (kin.q_y - y) ** 2 + kin.q_z**2)
    phi = profile(x, y, packet.sigma_perp) * np.exp(-1j * x * packet.b)
    return complex(_weighted_sum(amplitude(q) * phi, w) / (2.0 * math.pi))


def brute_events(kin, packet, amplitude, grid: GridSpec = GridSpec()) -> float:
    return packet.n_e * abs(brute_F(kin, packet, amplitude, grid)) ** 2


def brute_avg(kin: Kinematics, packet: PacketSpec, amplitude: Callable, grid: GridSpec = GridSpec()) -> float:
    """Averaged cross section as |f|^2 weighted by |Phi_tr|^2 on a fixed grid."""
    return _richardson(lambda n: _brute_avg(kin, packet, amplitude, n, grid), grid)


def _brute_avg(kin, packet, amplitude, n_radial, grid):
    x, y, w = polar_grid(n_radial, grid.n_angular, grid.cutoff(packet, kin))
    q = np.sqrt((kin.q_x - x) ** 2 + (kin.q_y - y) ** 2 + kin.q_z**2)
    dens = profile(x, y, packet.sigma_perp) ** 2
    return float(_weighted_sum(np.abs(amplitude(q)) ** 2 * dens, w))


def brute_impact_average(
    kin: Kinematics,
    packet: PacketSpec,
    amplitude: Callable,
    grid: GridSpec = GridSpec(96, 192, extrapolate=True),
    b_max: float | None = None,
    b_grid: tuple[int, int] = (160, 64),
    a: float = 1.0,
) -> float:
    """Average |F(Q; b)|^2 over impact-parameter vectors b in a disk.

    F is recomputed for every b on its own k-grid, so the phase integration
    that collapses the b-average analytically is done here by brute force.
    ``a`` sets the default disk radius 12 max(sigma, a).
    """
    if b_max is None:
        b_max = 12.0 * max(packet.sigma_perp, a)
    bx, by, bw = polar_grid(b_grid[0], b_grid[1], b_max)
    sizes = [grid.n_radial, 2 * grid.n_radial] if grid.extrapolate else [grid.n_radial]
    k_sets = []
    for n in sizes:
        kx, ky, kw = polar_grid(n, grid.n_angular, grid.cutoff(packet, kin))
        kx, ky, kw = kx.ravel(), ky.ravel(), kw.ravel()
        q = np.sqrt((kin.q_x - kx) ** 2 + (kin.q_y - ky) ** 2 + kin.q_z**2)
        base = amplitude(q) * profile(kx, ky, packet.sigma_perp) * kw / (2.0 * math.pi)
        k_sets.append((kx, ky, base))
    rows = np.empty(b_grid[0])
    for i in range(b_grid[0]):
        f_b = [np.exp(-1j * (np.outer(bx[i], kx) + np.outer(by[i], ky))) @ base for kx, ky, base in k_sets]
        if grid.extrapolate:
            f_b = (4.0 * f_b[1] - f_b[0]) / 3.0
        else:
            f_b = f_b[0]
        rows[i] = np.sum(np.abs(f_b) ** 2 * bw[i])
    return float(np.sum(rows))


def brute_psi(x, y, packet: PacketSpec, grid: GridSpec = GridSpec(256, 128)) -> np.ndarray:
    """Coordinate-space Psi_tr(r) by direct Fourier sum of Phi_tr."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return _richardson(lambda n: _brute_psi(x, y, packet, n, grid), grid)


def _brute_psi(x, y, packet, n_radial, grid):
    k_max = grid.k_max if grid.k_max is not None else 8.0 / packet.sigma_perp
    kx, ky, kw = polar_grid(n_radial, grid.n_angular, k_max)
    kx, ky, kw = kx.ravel(), ky.ravel(), kw.ravel()
    amp = profile(kx, ky, packet.sigma_perp) * np.exp(-1j * kx * packet.b) * kw / (2.0 * math.pi)
    out = np.empty(x.shape, dtype=complex)
    for start in range(0, x.size, 64):
        sl = slice(start, start + 64)
        out[sl] = np.exp(1j * (np.outer(x[sl], kx) + np.outer(y[sl], ky))) @ amp
    return out


def brute_total_events_ratio(
    packet: PacketSpec,
    amplitude: Callable,
    grid: GridSpec = GridSpec(96, 32, extrapolate=True),
    n_outer: int = 400,
    small_angle: bool = False,
) -> float:
    """nu / nu_st at b = 0 with a fixed outer grid over scattering angle.

    ``small_angle`` integrates d^2Q_perp / p^2 over the plane (Q_z = 0) via
    Q = t / (1 - t); otherwise u = 1 - cos(theta) = 2 t^3 covers the sphere.
    Each outer node evaluates F with :func:`brute_F`.
    """
    p = packet.p_i
    lum = luminosity(packet)
    t = (np.arange(n_outer) + 0.5) / n_outer
    dt = 1.0 / n_outer
    if small_angle:
        qp = t / (1.0 - t)
        qz = np.zeros_like(qp)
        qs = qp
        jac = qp * dt / (1.0 - t) ** 2
    else:
        u = 2.0 * t**3
        qp = p * np.sqrt(u * (2.0 - u))
        qz = -p * u
        qs = p * np.sqrt(2.0 * u)
        jac = 6.0 * t**2 * dt
    num = 0.0
    for x, z, w in zip(qp, qz, jac):
        kin = Kinematics(0.0, 0.0, p, p, float(x), float(z))
        num += w * packet.n_e * abs(brute_F(kin, packet, amplitude, grid)) ** 2
    den = float(np.sum(jac * lum * np.abs(amplitude(qs)) ** 2))
    return num / den
