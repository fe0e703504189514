"""
Domain types, kinematics and regime diagnostics.

Units: hbar = 1 and, by default, m_e = 1. Figure presets further measure
lengths in units of the potential range ``a`` (so ``p_i`` is ``p_i a``).
The packet axis is shifted by ``b`` along +x; azimuths are measured from b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

__all__ = [
    "PacketSpec",
    "GaussianWell",
    "HydrogenGround",
    "CustomRadial",
    "Potential",
    "Kinematics",
    "RegimeReport",
    "make_kinematics",
    "validate_regime",
    "radial_potential",
    "potential_range",
]


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian packet: transverse/longitudinal sizes, momentum, offset."""

    sigma_perp: float
    sigma_z: float
    p_i: float
    b: float = 0.0
    n_e: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        for name in ("sigma_perp", "sigma_z", "p_i", "n_e", "mass"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"PacketSpec.{name} must be positive and finite, got {v!r}")
        if not (self.b >= 0 and math.isfinite(self.b)):
            raise ValueError(f"PacketSpec.b must be >= 0, got {self.b!r}")

    def with_(self, **changes) -> "PacketSpec":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class GaussianWell:
    """U(r) = V exp(-r^2 / (2a)^2)."""

    v: float
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"GaussianWell.a must be positive, got {self.a!r}")


@dataclass(frozen=True)
class HydrogenGround:
    """Mean field of a ground-state hydrogen atom; ``a`` is the Bohr radius."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"HydrogenGround.a must be positive, got {self.a!r}")


@dataclass(frozen=True)
class CustomRadial:
    """User-supplied central potential.

    ``u`` must be a pure, vectorized map r -> U(r); ``r_cut`` is the radius
    beyond which |U| is negligible. ``a`` is the length scale used for
    diagnostics (defaults to ``r_cut / 10``).
    """

    u: Callable[[np.ndarray], np.ndarray]
    r_cut: float
    a: float | None = None

    def __post_init__(self):
        if not self.r_cut > 0:
            raise ValueError(f"CustomRadial.r_cut must be positive, got {self.r_cut!r}")
        if self.a is not None and not self.a > 0:
            raise ValueError("CustomRadial.a must be positive")


Potential = Union[GaussianWell, HydrogenGround, CustomRadial]


def potential_range(potential: Potential) -> float:
    if isinstance(potential, CustomRadial):
        return potential.a if potential.a is not None else potential.r_cut / 10.0
    return potential.a


def radial_potential(potential: Potential, mass: float = 1.0) -> tuple[Callable, float]:
    """Return ``(U, r_cut)`` for any supported potential."""
    if isinstance(potential, GaussianWell):
        v, a = potential.v, potential.a
        # exp(-64) relative to the peak
        return (lambda r: v * np.exp(-(np.asarray(r) / (2.0 * a)) ** 2)), 16.0 * a
    if isinstance(potential, HydrogenGround):
        a = potential.a
        e2 = 1.0 / (mass * a)

        def u(r):
            r = np.asarray(r, dtype=float)
            return -(e2 / r) * (1.0 + r / a) * np.exp(-2.0 * r / a)

        return u, 40.0 * a
    if isinstance(potential, CustomRadial):
        return potential.u, potential.r_cut
    raise TypeError(f"unsupported potential {type(potential).__name__}")


@dataclass(frozen=True)
class Kinematics:
    """Scattering direction and the momentum transfer Q = p_f - <k>.

    ``q_perp`` is the magnitude of the transverse transfer, directed at
    azimuth ``phi`` from the impact-parameter axis.
    """

    theta: float
    phi: float
    p_i: float
    p_f: float
    q_perp: float
    q_z: float

    @property
    def q_x(self) -> float:
        return self.q_perp * math.cos(self.phi)

    @property
    def q_y(self) -> float:
        return self.q_perp * math.sin(self.phi)

    @property
    def q_abs(self) -> float:
        return math.hypot(self.q_perp, self.q_z)


def make_kinematics(
    theta: float,
    phi: float,
    packet: PacketSpec,
    small_angle: bool = False,
    conical: bool = False,
) -> Kinematics:
    """Momentum transfer for scattering into direction (theta, phi).

    By default ``p_f = p_i``. ``small_angle=True`` uses the forward-peak
    approximation Q_perp = p_i theta, Q_z = 0, in which the packet closed
    forms for angular integrals become exact. ``conical=True`` keeps the
    ``p_f = sqrt(p_i^2 + kappa0^2)`` branch (twisted-state bookkeeping).
    """
    if not (0.0 <= theta <= math.pi):
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    if not math.isfinite(phi):
        raise ValueError(f"phi must be finite, got {phi!r}")
    phi = math.fmod(phi, 2.0 * math.pi)
    if phi < 0:
        phi += 2.0 * math.pi
    if phi >= 2.0 * math.pi:
        phi = 0.0
    p_i = packet.p_i
    if small_angle:
        return Kinematics(theta, phi, p_i, p_i, p_i * theta, 0.0)
    if conical:
        from .packet import kappa0

        p_f = math.hypot(p_i, kappa0(packet.sigma_perp))
    else:
        p_f = p_i
    q_perp = p_f * math.sin(theta)
    # p_f cos(theta) - p_i without cancellation when p_f == p_i
    if p_f == p_i:
        q_z = -2.0 * p_i * math.sin(0.5 * theta) ** 2
    else:
        q_z = p_f * math.cos(theta) - p_i
    return Kinematics(theta, phi, p_i, p_f, abs(q_perp), q_z)


@dataclass(frozen=True)
class RegimeReport:
    """Dimensionless checks of the packet-Born approximation regime.

    Every ratio should be small; those above ``threshold`` are listed in
    ``warnings``. Computation is never blocked.
    """

    ratio_a_over_sigma_z: float
    ratio_sigma_z_bound: float
    ratio_transverse_spread: float
    ratio_longitudinal_spread: float
    born_parameter: float
    threshold: float
    flags: dict = field(default_factory=dict)

    @property
    def dispersion_ok(self) -> bool:
        return self.flags["transverse_spread"] and self.flags["longitudinal_spread"]

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    @property
    def warnings(self) -> list[str]:
        values = self.as_dict()
        return [
            f"{name}={values[name]:.4g} exceeds {self.threshold:g}"
            for name, good in self.flags.items()
            if not good
        ]

    def as_dict(self) -> dict:
        return {
            "a_over_sigma_z": self.ratio_a_over_sigma_z,
            "sigma_z_bound": self.ratio_sigma_z_bound,
            "transverse_spread": self.ratio_transverse_spread,
            "longitudinal_spread": self.ratio_longitudinal_spread,
            "born_parameter": self.born_parameter,
        }


def validate_regime(
    packet: PacketSpec, potential: Potential, threshold: float = 0.3
) -> RegimeReport:
    """Evaluate the validity ratios of the packet formulas.

    Checks ``a << sigma_z << sigma_perp p_i / kappa0`` and
    ``1/sigma << p_i`` in both directions, plus the first-Born condition
    (``V m a / p_i`` for the Gaussian well, ``1/(p_i a)`` for hydrogen).
    """
    from .packet import kappa0

    a = potential_range(potential)
    s, sz, p = packet.sigma_perp, packet.sigma_z, packet.p_i
    if isinstance(potential, GaussianWell):
        born = abs(potential.v) * packet.mass * a / p
    elif isinstance(potential, HydrogenGround):
        born = 1.0 / (p * a)
    else:
        born = 0.0
    ratios = {
        "a_over_sigma_z": a / sz,
        "sigma_z_bound": sz * kappa0(s) / (s * p),
        "transverse_spread": 1.0 / (s * p),
        "longitudinal_spread": 1.0 / (sz * p),
        "born_parameter": born,
    }
    flags = {name: bool(v <= threshold) for name, v in ratios.items()}
    return RegimeReport(
        ratios["a_over_sigma_z"],
        ratios["sigma_z_bound"],
        ratios["transverse_spread"],
        ratios["longitudinal_spread"],
        ratios["born_parameter"],
        threshold,
        flags,
    )
