import ast
import math
import pathlib

import numpy as np
import pytest

import packetborn.oracle as oracle_mod
from packetborn import (
    GaussianWell,
    HydrogenGround,
    PacketSpec,
    avg_xsec_gauss_gauss,
    avg_xsec_hydrogen,
    born_gaussian,
    born_hydrogen,
    f_packet_gaussian,
    make_kinematics,
)
from packetborn.oracle import GridSpec, brute_avg, brute_F, brute_impact_average

GW = GaussianWell(1.0, 1.0)


def gauss_amp(q):
    return born_gaussian(q, 1.0, 1.0)


def hyd_amp(q):
    return born_hydrogen(q, 1.0)


def pk(s=1.0, b=0.0):
    return PacketSpec(s, 10.0, 10.0, b)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(8, 64)
    with pytest.raises(ValueError):
        GridSpec(64, 64, k_max=0.0)
    kin = make_kinematics(0.1, 0.0, pk(2.0))
    assert GridSpec().cutoff(pk(2.0), kin) == pytest.approx(4.0 + kin.q_abs)


def test_brute_F_reference_point():
    p = pk()
    kin = make_kinematics(0.05, 0.0, p)
    exact = f_packet_gaussian(kin, p, GW)
    assert abs(brute_F(kin, p, gauss_amp, GridSpec(256, 256)) - exact) <= 1e-6 * abs(exact) * 200
    assert abs(brute_F(kin, p, gauss_amp, GridSpec(256, 256, extrapolate=True)) - exact) <= 1e-6 * abs(exact)


def test_second_order_convergence():
    p = pk(1.0, 1.0)
    kin = make_kinematics(0.1, 0.5, p)
    exact = f_packet_gaussian(kin, p, GW)
    errs = [abs(brute_F(kin, p, gauss_amp, GridSpec(n, 256)) - exact) for n in (64, 128, 256)]
    assert errs[0] / errs[1] >= 4 * 0.95
    assert errs[1] / errs[2] >= 4 * 0.95


def test_phase_bookkeeping_at_zero_transfer():
    # with Q_perp = 0 the shift changes only the real B factor, never the phase
    kin = make_kinematics(0.0, 0.0, pk())
    g = GridSpec(256, 128, extrapolate=True)
    shifted = brute_F(kin, pk(1.0, 3.0), gauss_amp, g)
    centred = brute_F(kin, pk(1.0, 0.0), gauss_amp, g)
    assert abs(shifted.imag) < 1e-12 * abs(shifted)
    assert shifted.real / centred.real == pytest.approx(math.exp(-9 / 8), rel=1e-6)


@pytest.mark.parametrize("s", [1e3, 1.0, 0.3])
def test_brute_avg_on_figure_grid(s):
    p = pk(s)
    # the default cutoff adds |Q|, which wastes the radial grid on a narrow packet
    g = GridSpec(512, 128, k_max=8.0 / s if s > 10 else None, extrapolate=True)
    for theta in np.linspace(0, 0.5, 6):
        kin = make_kinematics(theta, 0.0, p)
        assert brute_avg(kin, p, gauss_amp, g) == pytest.approx(avg_xsec_gauss_gauss(kin, p, GW).value, rel=1e-6)
        assert brute_avg(kin, p, hyd_amp, g) == pytest.approx(avg_xsec_hydrogen(kin, p, HydrogenGround(1.0)).value, rel=1e-5)


def test_brute_avg_wide_packet():
    p = pk(1e3)
    kin = make_kinematics(0.1, 0.0, p)
    assert brute_avg(kin, p, hyd_amp, GridSpec(256, 64, k_max=8e-3, extrapolate=True)) == pytest.approx(hyd_amp(kin.q_abs) ** 2, rel=1e-4)


@pytest.mark.slow
def test_impact_average_gaussian_and_truncation():
    p = pk()
    kin = make_kinematics(0.05, 0.0, p)
    exact = avg_xsec_gauss_gauss(kin, p, GW).value
    small = brute_impact_average(kin, p, gauss_amp, GridSpec(48, 96, extrapolate=True), b_max=4.0, b_grid=(60, 48))
    big = brute_impact_average(kin, p, gauss_amp, GridSpec(48, 96, extrapolate=True), b_max=8.0, b_grid=(120, 48))
    assert abs(big - exact) < abs(small - exact)


def test_no_shared_quadrature():
    src = pathlib.Path(oracle_mod.__file__).read_text()
    tree = ast.parse(src)
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
        elif isinstance(node, ast.Import):
            imported.update(a.name for a in node.names)
    assert not any("quadrature" in m for m in imported)
