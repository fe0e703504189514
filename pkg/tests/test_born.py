import math
import time

import numpy as np
import pytest

from packetborn import CustomRadial, GaussianWell, HydrogenGround, born_gaussian, born_hydrogen, born_numeric, sigma_standard
from packetborn.born import tabulate_amplitude

F0 = -4 * math.sqrt(math.pi)


def test_gaussian_values():
    assert born_gaussian(0.0, 1.0, 1.0) == pytest.approx(-7.0898, abs=1e-4)
    assert born_gaussian(1.0, 1.0, 1.0) == pytest.approx(-2.6082, abs=1e-4)
    assert born_gaussian(40.0, 1.0, 1.0) == 0.0


def test_hydrogen_values():
    assert born_hydrogen(0.0, 1.0) == pytest.approx(1.0)
    assert born_hydrogen(2.0, 1.0) == pytest.approx(0.375)
    q = 1e4
    assert born_hydrogen(q, 1.0) == pytest.approx(2 / q**2, rel=1e-6)


def test_vectorized():
    out = born_hydrogen(np.array([0.0, 2.0]), 1.0)
    assert out.shape == (2,)


def test_numeric_examples():
    g = GaussianWell(1.0, 1.0)
    r = born_numeric(g, 1.0, tol=1e-10)
    assert r.converged
    assert r.value == pytest.approx(F0 * math.exp(-1), rel=1e-10)
    h = born_numeric(HydrogenGround(1.0), 2.0, tol=1e-10)
    assert h.value == pytest.approx(0.375, rel=1e-10)
    assert born_numeric(g, 0.0).value == pytest.approx(F0, rel=1e-10)


Q_GRID = np.concatenate([[0.0], np.logspace(-2, math.log10(20.0), 19)])


@pytest.mark.parametrize("q", Q_GRID)
def test_numeric_matches_hydrogen(q):
    r = born_numeric(HydrogenGround(1.0), q, tol=1e-10)
    assert r.converged
    assert r.value == pytest.approx(born_hydrogen(q, 1.0), rel=1e-10)


@pytest.mark.parametrize("q", Q_GRID)
def test_numeric_matches_gaussian(q):
    # deep in the Gaussian tail f drops below the r-space roundoff floor;
    # there the result must be flagged with an error bar that covers the truth
    tol = 1e-10
    exact = born_gaussian(q, 1.0, 1.0)
    r = born_numeric(GaussianWell(1.0, 1.0), q, tol=tol)
    if abs(exact) > 1e-3 * abs(F0):
        assert r.converged
    if r.converged:
        assert r.value == pytest.approx(exact, rel=tol)
    else:
        assert abs(r.value - exact) <= 10 * r.error_estimate


def test_continuity_at_zero():
    pot = HydrogenGround(1.0)
    f0 = born_numeric(pot, 0.0).value
    for q in (1e-9, 1e-7, 1e-5):
        assert born_numeric(pot, q).value == pytest.approx(f0, rel=1e-8)


def test_even_in_q():
    pot = GaussianWell(1.0, 1.0)
    assert born_numeric(pot, -1.5).value == born_numeric(pot, 1.5).value


def test_custom_potential_matches_gaussian():
    pot = CustomRadial(lambda r: np.exp(-r * r / 4.0), r_cut=16.0, a=1.0)
    for q in (0.0, 0.5, 2.0):
        assert born_numeric(pot, q).value == pytest.approx(born_gaussian(q, 1.0, 1.0), rel=1e-9)
    table = tabulate_amplitude(pot, n=200, q_max=10.0)
    qs = np.linspace(0, 3, 31)
    assert np.allclose(table(qs), born_gaussian(qs, 1.0, 1.0), rtol=0, atol=1e-6)


def test_sigma_standard_gaussian():
    t = time.perf_counter()
    r = sigma_standard(GaussianWell(1.0, 1.0), 10.0)
    assert time.perf_counter() - t < 1.0
    assert r.value == pytest.approx(math.pi * F0**2 / (2 * 100), rel=1e-8)
    r20 = sigma_standard(GaussianWell(1.0, 1.0), 20.0)
    assert r.value / r20.value == pytest.approx(4.0, rel=1e-9)


def test_sigma_standard_hydrogen():
    r = sigma_standard(HydrogenGround(1.0), 10.0)
    assert r.value > 0
    assert r.value == pytest.approx(7 * math.pi / 300, rel=0.02)


def test_sigma_standard_rejects_bad_momentum():
    with pytest.raises(ValueError):
        sigma_standard(HydrogenGround(1.0), 0.0)
