"""
Scattering of a Gaussian wave packet on a potential field.

Central quantities::

    F(Q)        = int f(Q - k) Phi_tr(k) d^2k / (2 pi)
    dnu/dOmega  = N_e |F(Q)|^2
    dsig/dOmega = int |f(Q - k)|^2 |Phi_tr(k)|^2 d^2k      (impact-averaged)

Closed forms exist for the Gaussian well; the hydrogen atom reduces to a
one-fold integral over an auxiliary variable x; any amplitude can go
through the generic two-dimensional convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .born import amplitude_function
from .model import (
    GaussianWell,
    HydrogenGround,
    Kinematics,
    PacketSpec,
    Potential,
    make_kinematics,
    potential_range,
)
from .packet import luminosity, phi_tr, profile
from .quadrature import QuadratureResult, integrate_1d, integrate_2d, integrate_semi_infinite

__all__ = [
    "EventDensity",
    "AveragedCrossSection",
    "GaussGaussFactors",
    "gauss_gauss_factors",
    "f_packet_gaussian",
    "events_gauss_gauss",
    "avg_xsec_gauss_gauss",
    "events_hydrogen",
    "avg_xsec_hydrogen",
    "f_packet_numeric",
    "events_numeric",
    "avg_xsec_numeric",
    "events_standard",
    "xsec_standard",
    "events",
    "avg_xsec",
    "total_events_ratio",
    "angular_half_width",
    "PHI_CUTOFF",
]

# |Phi_tr| / peak at the truncation radius of the plane integrals
PHI_CUTOFF = 1e-16
_R_CUT_SIGMA = math.sqrt(-math.log(PHI_CUTOFF))


@dataclass(frozen=True)
class EventDensity:
    """Differential number of events dnu/dOmega (per steradian)."""

    value: float
    error: float = 0.0
    converged: bool = True


@dataclass(frozen=True)
class AveragedCrossSection:
    """Impact-parameter averaged cross section dsigma-bar/dOmega."""

    value: float
    error: float = 0.0
    converged: bool = True


@dataclass(frozen=True)
class GaussGaussFactors:
    big_b: float
    beta: float
    enhancement: float
    width_factor: float
    b_exponent: float = 0.0

    @property
    def b_squared(self) -> float:
        # doubling the exponent is exact; squaring big_b would round twice
        return math.exp(2.0 * self.b_exponent)


def _require(potential, kind):
    if not isinstance(potential, kind):
        raise TypeError(f"expected {kind.__name__}, got {type(potential).__name__}")


# -- model 1: Gaussian packet on a Gaussian well -------------------------------

def gauss_gauss_factors(kin: Kinematics, packet: PacketSpec, potential: GaussianWell) -> GaussGaussFactors:
    _require(potential, GaussianWell)
    a, s, b = potential.a, packet.sigma_perp, packet.b
    d = 1.0 + (s / a) ** 2
    b_exponent = -(b * b) / (4.0 * (s * s + a * a))
    big_b = math.exp(b_exponent)
    beta = kin.q_perp * b * math.cos(kin.phi) / d
    with np.errstate(over="ignore"):
        enhancement = float(np.exp((kin.q_perp * a) ** 2 / d))
    return GaussGaussFactors(big_b, beta, enhancement, 1.0 + (a / s) ** 2, b_exponent)


def _gg_log_amplitude(kin, packet, potential):
    # log of |F| / |f0| / prefactor, as one exponent (no overflow)
    a, s, b = potential.a, packet.sigma_perp, packet.b
    d = 1.0 + (s / a) ** 2
    return (
        (kin.q_perp * a) ** 2 / d
        - (kin.q_perp**2 + kin.q_z**2) * a * a
        - b * b / (4.0 * (s * s + a * a))
    )


def f_packet_gaussian(kin: Kinematics, packet: PacketSpec, potential: GaussianWell) -> complex:
    """Closed-form packet amplitude F(Q) for the Gaussian well."""
    _require(potential, GaussianWell)
    a, s = potential.a, packet.sigma_perp
    f0 = -4.0 * math.sqrt(math.pi) * packet.mass * potential.v * a**3
    beta = kin.q_perp * packet.b * math.cos(kin.phi) / (1.0 + (s / a) ** 2)
    mag = f0 * math.exp(_gg_log_amplitude(kin, packet, potential))
    mag /= (1.0 + (a / s) ** 2) * math.sqrt(2.0 * math.pi) * s
    return mag * complex(math.cos(beta), -math.sin(beta))


def events_gauss_gauss(kin: Kinematics, packet: PacketSpec, potential: GaussianWell) -> EventDensity:
    """dnu/dOmega = B^2 e^{2(Q_perp a)^2/(1+s^2/a^2)} / (1+a^2/s^2)^2 * L |f(Q)|^2."""
    _require(potential, GaussianWell)
    a, s = potential.a, packet.sigma_perp
    f0 = -4.0 * math.sqrt(math.pi) * packet.mass * potential.v * a**3
    w = 1.0 + (a / s) ** 2
    value = luminosity(packet) * f0 * f0 * math.exp(2.0 * _gg_log_amplitude(kin, packet, potential)) / (w * w)
    return EventDensity(value)


def avg_xsec_gauss_gauss(kin: Kinematics, packet: PacketSpec, potential: GaussianWell) -> AveragedCrossSection:
    """dsigma-bar/dOmega = e^{2(Q_perp a)^2/(1+s^2/a^2)} / (1+a^2/s^2) * |f(Q)|^2."""
    _require(potential, GaussianWell)
    a, s = potential.a, packet.sigma_perp
    f0 = -4.0 * math.sqrt(math.pi) * packet.mass * potential.v * a**3
    expo = 2.0 * (kin.q_perp * a) ** 2 / (1.0 + (s / a) ** 2) - 2.0 * (kin.q_perp**2 + kin.q_z**2) * a * a
    return AveragedCrossSection(f0 * f0 * math.exp(expo) / (1.0 + (a / s) ** 2))


# -- model 2: Gaussian packet on ground-state hydrogen -------------------------

def _hydrogen_x_integral(q_perp, q_z, cos_phi, packet, a, tol):
    s = 4.0 * packet.sigma_perp**2 / (a * a)
    b = packet.b
    c0 = (q_perp * a) ** 2 / 4.0
    cz = 1.0 + (q_z * a) ** 2 / 4.0
    if b == 0.0 or q_perp == 0.0 or cos_phi == 0.0:
        phase_coef = 0.0
    else:
        phase_coef = q_perp * b * cos_phi
    b2 = b * b / (a * a)

    def h(x):
        w = 1.0 + x / s
        expo = -x * (cz + c0 / w) - b2 / (x + s)
        out = np.exp(expo) * (1.0 + x) / w
        if phase_coef == 0.0:
            return out
        return out * np.exp(-1j * phase_coef * x / (x + s))

    return integrate_semi_infinite(h, 0.0, abs_tol=1e-300, rel_tol=tol)


def events_hydrogen(
    kin: Kinematics, packet: PacketSpec, potential: HydrogenGround, tol: float = 1e-10
) -> EventDensity:
    """Event density for hydrogen via the one-fold x-integral.

    dnu/dOmega = L f0^2 |int_0^inf exp(-x g0 - i g1 b cos(phi) - g2 b^2)
                 (1+x)/(1+x/s) dx|^2,  f0 = a/2,  s = 4 sigma^2 / a^2.
    Real and imaginary parts share subdivision points.
    """
    _require(potential, HydrogenGround)
    a = potential.a
    res = _hydrogen_x_integral(kin.q_perp, kin.q_z, math.cos(kin.phi), packet, a, tol)
    scale = luminosity(packet) * (0.5 * a) ** 2
    mag = abs(res.value)
    err = scale * (2.0 * mag * res.error_estimate + res.error_estimate**2)
    return EventDensity(scale * mag * mag, err, res.converged)


def avg_xsec_hydrogen(
    kin: Kinematics, packet: PacketSpec, potential: HydrogenGround, tol: float = 1e-10
) -> AveragedCrossSection:
    """Averaged cross section for hydrogen via the one-fold x-integral.

    dsigma-bar/dOmega = f0^2 int_0^inf e^{-x g} (x + x^2 + x^3/6) / (1 + x/(2s)) dx.
    """
    _require(potential, HydrogenGround)
    a = potential.a
    s2 = 8.0 * packet.sigma_perp**2 / (a * a)
    c0 = (kin.q_perp * a) ** 2 / 4.0
    cz = 1.0 + (kin.q_z * a) ** 2 / 4.0

    def h(x):
        w = 1.0 + x / s2
        return np.exp(-x * (cz + c0 / w)) * (x + x * x + x**3 / 6.0) / w

    res = integrate_semi_infinite(h, 0.0, abs_tol=1e-300, rel_tol=tol)
    f02 = (0.5 * a) ** 2
    return AveragedCrossSection(f02 * res.value, f02 * res.error_estimate, res.converged)


# -- generic convolution path --------------------------------------------------

def _amplitude_sup(amplitude, upper):
    q = np.linspace(0.0, upper, 65)
    return float(np.max(np.abs(amplitude(q))))


def f_packet_numeric(
    kin: Kinematics, packet: PacketSpec, amplitude: Callable, tol: float = 1e-10
) -> QuadratureResult:
    """F(Q) by adaptive quadrature over the k_perp plane.

    ``amplitude`` maps |q| (ndarray) to the plane-wave Born amplitude. The
    plane is truncated where |Phi_tr| falls to ``PHI_CUTOFF`` of its peak and
    the neglected exterior is bounded and folded into the error.
    """
    s = packet.sigma_perp
    radius = _R_CUT_SIGMA / s
    qx, qy, qz2 = kin.q_x, kin.q_y, kin.q_z**2

    def integrand(kx, ky):
        q = np.sqrt((qx - kx) ** 2 + (qy - ky) ** 2 + qz2)
        return amplitude(q) * phi_tr(kx, ky, packet) / (2.0 * math.pi)

    sup = _amplitude_sup(amplitude, kin.q_abs + radius)
    tail = sup * PHI_CUTOFF / (math.sqrt(2.0 * math.pi) * s)
    return integrate_2d(integrand, (0.0, 0.0), radius, abs_tol=1e-300, rel_tol=tol, tail_bound=tail)


def events_numeric(
    kin: Kinematics, packet: PacketSpec, amplitude: Callable, tol: float = 1e-10
) -> EventDensity:
    """dnu/dOmega = N_e |F(Q)|^2 with F from the plane convolution."""
    res = f_packet_numeric(kin, packet, amplitude, tol)
    mag = abs(res.value)
    err = packet.n_e * (2.0 * mag * res.error_estimate + res.error_estimate**2)
    return EventDensity(packet.n_e * mag * mag, err, res.converged)


def avg_xsec_numeric(
    kin: Kinematics, packet: PacketSpec, amplitude: Callable, tol: float = 1e-10
) -> AveragedCrossSection:
    """Averaged cross section: |f|^2 smeared over the packet's |Phi_tr|^2."""
    s = packet.sigma_perp
    radius = _R_CUT_SIGMA / s
    qx, qy, qz2 = kin.q_x, kin.q_y, kin.q_z**2

    def integrand(kx, ky):
        q = np.sqrt((qx - kx) ** 2 + (qy - ky) ** 2 + qz2)
        return np.abs(amplitude(q)) ** 2 * profile(kx, ky, s) ** 2

    sup = _amplitude_sup(amplitude, kin.q_abs + radius)
    tail = sup**2 * PHI_CUTOFF**2
    res = integrate_2d(integrand, (0.0, 0.0), radius, abs_tol=1e-300, rel_tol=tol, tail_bound=tail)
    return AveragedCrossSection(float(np.real(res.value)), res.error_estimate, res.converged)


# -- dispatch and standard references -------------------------------------------

def events_standard(kin: Kinematics, packet: PacketSpec, potential: Potential) -> float:
    """Plane-wave event density L |f(Q)|^2 with L = N_e / (2 pi sigma^2)."""
    amp = amplitude_function(potential, packet.mass)
    return luminosity(packet) * float(np.abs(amp(kin.q_abs))) ** 2


def xsec_standard(kin: Kinematics, packet: PacketSpec, potential: Potential) -> float:
    amp = amplitude_function(potential, packet.mass)
    return float(np.abs(amp(kin.q_abs))) ** 2


def events(kin, packet, potential, tol: float = 1e-10, amplitude=None) -> EventDensity:
    """Event density through the fastest available path for ``potential``."""
    if isinstance(potential, GaussianWell):
        return events_gauss_gauss(kin, packet, potential)
    if isinstance(potential, HydrogenGround):
        return events_hydrogen(kin, packet, potential, tol)
    amp = amplitude or amplitude_function(potential, packet.mass)
    return events_numeric(kin, packet, amp, tol)


def avg_xsec(kin, packet, potential, tol: float = 1e-10, amplitude=None) -> AveragedCrossSection:
    """Averaged cross section through the fastest available path."""
    if isinstance(potential, GaussianWell):
        return avg_xsec_gauss_gauss(kin, packet, potential)
    if isinstance(potential, HydrogenGround):
        return avg_xsec_hydrogen(kin, packet, potential, tol)
    amp = amplitude or amplitude_function(potential, packet.mass)
    return avg_xsec_numeric(kin, packet, amp, tol)


# -- angular integrals ---------------------------------------------------------

def _events_at(q_perp, q_z, packet, potential, tol, amplitude):
    p = packet.p_i
    theta = min(math.pi, math.atan2(q_perp, p + q_z)) if q_perp or q_z else 0.0
    kin = Kinematics(theta, 0.0, p, p, q_perp, q_z)
    return events(kin, packet, potential, tol, amplitude).value


def total_events_ratio(
    packet: PacketSpec,
    potential: Potential,
    tol: float = 1e-7,
    small_angle: bool = False,
) -> QuadratureResult:
    """nu / nu_st: total events over total plane-wave events, at b = 0.

    With ``small_angle=False`` the full sphere is integrated with exact
    transfer Q_perp = p sin(theta), Q_z = p (cos(theta) - 1). With
    ``small_angle=True`` the forward approximation dOmega = d^2Q_perp / p^2,
    Q_z = 0 is used over the whole Q_perp plane.
    """
    if packet.b != 0.0:
        raise ValueError("total_events_ratio is defined for central collisions (b = 0)")
    p = packet.p_i
    a = potential_range(potential)
    amp = amplitude_function(potential, packet.mass)
    lum = luminosity(packet)
    inner_tol = tol * 1e-2

    if small_angle:
        def packet_fn(q):
            return np.array([_events_at(x, 0.0, packet, potential, inner_tol, amp) * x for x in np.atleast_1d(q)])

        def std_fn(q):
            return lum * np.abs(amp(q)) ** 2 * q

        num = integrate_semi_infinite(packet_fn, 0.0, abs_tol=1e-300, rel_tol=tol)
        den = integrate_semi_infinite(std_fn, 0.0, abs_tol=1e-300, rel_tol=tol * 1e-2)
    else:
        u_peak = 1.0 / (p * a) ** 2
        points = [u_peak * 10.0**k for k in range(-2, 4) if u_peak * 10.0**k < 2.0]

        def packet_fn(u):
            u = np.atleast_1d(u)
            qp = p * np.sqrt(u * (2.0 - u))
            return np.array([_events_at(x, -p * y, packet, potential, inner_tol, amp) for x, y in zip(qp, u)])

        def std_fn(u):
            return lum * np.abs(amp(p * np.sqrt(2.0 * u))) ** 2

        num = integrate_1d(packet_fn, 0.0, 2.0, abs_tol=1e-300, rel_tol=tol, points=points)
        den = integrate_1d(std_fn, 0.0, 2.0, abs_tol=1e-300, rel_tol=tol * 1e-2, points=points)

    ratio = num.value / den.value
    err = abs(ratio) * (num.error_estimate / abs(num.value) + den.error_estimate / abs(den.value))
    return QuadratureResult(
        ratio, err, num.evaluations + den.evaluations, num.converged and den.converged
    )


def angular_half_width(
    packet: PacketSpec,
    potential: Potential,
    small_angle: bool = False,
    tol: float = 1e-10,
) -> float:
    """Polar angle where the averaged cross section falls to half its forward value."""
    def rel(theta):
        kin = make_kinematics(theta, 0.0, packet, small_angle=small_angle)
        return avg_xsec(kin, packet, potential, tol).value

    forward = rel(0.0)
    hi = 1e-3
    while rel(hi) > 0.5 * forward:
        hi *= 2.0
        if hi >= math.pi:
            hi = math.pi
            break
    return brentq(lambda t: rel(t) / forward - 0.5, 0.0, hi, xtol=1e-13, rtol=1e-12)
