import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from packetborn import GaussianWell, HydrogenGround, PacketSpec, make_kinematics, validate_regime


def test_forward(packet):
    k = make_kinematics(0.0, 0.0, packet)
    assert k.q_perp == 0.0 and k.q_z == 0.0


def test_backward(packet):
    k = make_kinematics(math.pi, 0.0, packet)
    assert abs(k.q_perp) < 1e-14
    assert k.q_z == pytest.approx(-20.0, abs=1e-14)


def test_small_angle_values(packet):
    k = make_kinematics(0.1, 0.0, packet)
    assert k.q_perp == pytest.approx(10 * math.sin(0.1), rel=1e-15)
    assert k.q_z == pytest.approx(10 * (math.cos(0.1) - 1), rel=1e-12)
    assert k.q_perp == pytest.approx(0.99833, abs=1e-5)
    assert k.q_z == pytest.approx(-0.049958, abs=1e-6)


def test_angle_domain(packet):
    with pytest.raises(ValueError):
        make_kinematics(-0.1, 0.0, packet)
    with pytest.raises(ValueError):
        make_kinematics(4.0, 0.0, packet)
    assert make_kinematics(0.2, -math.pi / 2, packet).phi == pytest.approx(1.5 * math.pi)


def test_small_angle_mode(packet):
    k = make_kinematics(0.1, 0.0, packet, small_angle=True)
    assert k.q_perp == pytest.approx(1.0) and k.q_z == 0.0


def test_conical_branch_is_opt_in(packet):
    assert make_kinematics(0.1, 0.0, packet).p_f == packet.p_i
    k = make_kinematics(0.1, 0.0, packet, conical=True)
    assert k.p_f > packet.p_i


@given(theta=st.floats(0.0, math.pi), phi=st.floats(0.0, 6.28), p=st.floats(0.1, 100.0))
def test_transfer_identity(theta, phi, p):
    packet = PacketSpec(1.0, 10.0, p)
    k = make_kinematics(theta, phi, packet)
    assert k.q_perp >= 0 and k.q_z <= 0
    assert 0 <= k.phi < 2 * math.pi
    expected = 4 * p * p * math.sin(theta / 2) ** 2
    assert k.q_perp**2 + k.q_z**2 == pytest.approx(expected, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize(
    "kwargs",
    [dict(sigma_perp=0.0), dict(sigma_z=-1.0), dict(p_i=0.0), dict(n_e=0.0), dict(mass=0.0), dict(b=-1.0)],
)
def test_packet_invariants(kwargs):
    base = dict(sigma_perp=1.0, sigma_z=10.0, p_i=10.0)
    base.update(kwargs)
    with pytest.raises(ValueError):
        PacketSpec(**base)


def test_potential_invariants():
    with pytest.raises(ValueError):
        GaussianWell(1.0, 0.0)
    with pytest.raises(ValueError):
        HydrogenGround(-1.0)


def test_regime_reference_point(packet, gauss):
    r = validate_regime(packet, gauss)
    assert r.ratio_a_over_sigma_z == pytest.approx(0.1)
    assert r.flags["a_over_sigma_z"]
    assert r.dispersion_ok
    # sigma_z kappa0 / (sigma p) = 10 * 0.6267 / 10 exceeds the default 0.3
    assert r.ratio_sigma_z_bound == pytest.approx(0.6267, abs=1e-4)
    assert not r.flags["sigma_z_bound"]


def test_regime_short_packet(gauss):
    r = validate_regime(PacketSpec(1.0, 0.5, 10.0), gauss)
    assert r.ratio_a_over_sigma_z == pytest.approx(2.0)
    assert not r.flags["a_over_sigma_z"]
    assert any("a_over_sigma_z" in w for w in r.warnings)


def test_regime_plane_wave_limit(hydrogen):
    r = validate_regime(PacketSpec(1e7, 1e6, 10.0), hydrogen)
    for name, value in r.as_dict().items():
        assert math.isfinite(value) and value >= 0
        if name != "born_parameter":
            assert value < 1e-5
    assert r.dispersion_ok
