"""
Gaussian transverse wave packet in momentum and coordinate space.

Phi_tr(k) = a(k) exp(-i k.b),  a(k) = exp(-(k sigma)^2) / sqrt(pi / (2 sigma^2)),
normalized to int |Phi_tr|^2 d^2k = 1. The impact parameter b lies along +x.
"""

from __future__ import annotations

import math

import numpy as np

from .model import PacketSpec

__all__ = [
    "profile",
    "shift_phase",
    "phi_tr",
    "psi_tr",
    "kappa0",
    "sigma_perp_t",
    "transverse_density",
    "luminosity",
]


def profile(kx, ky, sigma_perp: float):
    """Un-shifted momentum profile a(k_perp)."""
    k2 = np.asarray(kx) ** 2 + np.asarray(ky) ** 2
    return sigma_perp * math.sqrt(2.0 / math.pi) * np.exp(-k2 * sigma_perp**2)


def shift_phase(kx, ky, b: float):
    """Phase factor exp(-i k.b) for an axis displaced by b along x."""
    return np.exp(-1j * np.asarray(kx) * b) * np.ones_like(np.asarray(ky), dtype=float)


def phi_tr(kx, ky, packet: PacketSpec):
    """Transverse momentum-space wavefunction Phi_tr(k_perp)."""
    return profile(kx, ky, packet.sigma_perp) * shift_phase(kx, ky, packet.b)


def psi_tr(x, y, packet: PacketSpec):
    """Coordinate-space transverse wavefunction (closed form at t = 0).

    Psi_tr(r) = int Phi_tr(k) exp(i k.r) d^2k / (2 pi)
              = exp(-(r - b)^2 / (4 sigma^2)) / (sqrt(2 pi) sigma).
    """
    s = packet.sigma_perp
    d2 = (np.asarray(x) - packet.b) ** 2 + np.asarray(y) ** 2
    return np.exp(-d2 / (4.0 * s * s)) / (math.sqrt(2.0 * math.pi) * s)


def kappa0(sigma_perp: float) -> float:
    """Mean transverse momentum magnitude <|k_perp|> of the Gaussian packet."""
    if not sigma_perp > 0:
        raise ValueError("sigma_perp must be positive")
    return math.sqrt(math.pi) / (2.0 * math.sqrt(2.0) * sigma_perp)


def sigma_perp_t(sigma_perp: float, t: float, mass: float = 1.0) -> float:
    """Transverse width after free spreading for time t."""
    if not sigma_perp > 0:
        raise ValueError("sigma_perp must be positive")
    return math.hypot(sigma_perp, t / (2.0 * sigma_perp * mass))


def transverse_density(x, y, t: float, packet: PacketSpec):
    """Number density per unit transverse area, n_tr(r_perp, t)."""
    st = sigma_perp_t(packet.sigma_perp, t, packet.mass)
    d2 = (np.asarray(x) - packet.b) ** 2 + np.asarray(y) ** 2
    return packet.n_e / (2.0 * math.pi * st * st) * np.exp(-d2 / (2.0 * st * st))


def luminosity(packet: PacketSpec) -> float:
    """L = N_e / (2 pi sigma_perp^2), the central transverse density at b = 0."""
    return packet.n_e / (2.0 * math.pi * packet.sigma_perp**2)
