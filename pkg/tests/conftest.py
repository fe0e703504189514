import pytest

from packetborn import GaussianWell, HydrogenGround, PacketSpec


@pytest.fixture
def gauss():
    return GaussianWell(1.0, 1.0)


@pytest.fixture
def hydrogen():
    return HydrogenGround(1.0)


@pytest.fixture
def packet():
    return PacketSpec(sigma_perp=1.0, sigma_z=10.0, p_i=10.0)
