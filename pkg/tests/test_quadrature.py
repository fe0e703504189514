import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from packetborn.quadrature import csum, integrate_1d, integrate_2d, integrate_semi_infinite


def test_polynomial_exact():
    r = integrate_1d(lambda x: x**2, 0.0, 1.0)
    assert r.converged
    assert abs(r.value - 1 / 3) < 1e-12


def test_sine():
    r = integrate_1d(np.sin, 0.0, math.pi)
    assert abs(r.value - 2.0) < 1e-12


def test_endpoint_singularity():
    r = integrate_1d(lambda x: 1 / np.sqrt(x), 0.0, 1.0)
    assert r.converged
    assert abs(r.value - 2.0) < 1e-8


def test_result_invariants():
    r = integrate_1d(np.exp, 0.0, 1.0, abs_tol=1e-13, rel_tol=1e-10)
    assert r.error_estimate >= 0
    assert r.evaluations >= 1
    assert r.error_estimate <= max(1e-13, 1e-10 * abs(r.value))
    assert float(r) == r.value


def test_complex_integrand():
    r = integrate_1d(lambda x: np.exp(1j * x), 0.0, math.pi)
    assert abs(r.value - 2j) < 1e-12


def test_budget_exhaustion_is_flagged():
    r = integrate_1d(lambda x: np.sin(1 / x), 1e-6, 1.0, max_evals=200)
    assert not r.converged
    assert r.evaluations <= 215


def test_rejects_bad_interval():
    with pytest.raises(ValueError):
        integrate_1d(np.sin, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate_1d(np.sin, 0.0, 1.0, rel_tol=0.0)


@pytest.mark.parametrize(
    "f, exact",
    [
        (lambda x: np.exp(-x), 1.0),
        (lambda x: (1 + x) * np.exp(-2 * x), 0.75),
        (lambda x: x**3 * np.exp(-x) / 6, 1.0),
    ],
)
def test_semi_infinite(f, exact):
    r = integrate_semi_infinite(f, 0.0)
    assert r.converged
    assert abs(r.value - exact) < 1e-10


def test_semi_infinite_shifted_origin():
    r = integrate_semi_infinite(lambda x: np.exp(-x), 2.0)
    assert abs(r.value - math.exp(-2.0)) < 1e-12


def test_2d_gaussian():
    r = integrate_2d(lambda x, y: np.exp(-(x * x + y * y)), radius_cut=10.0)
    assert r.converged
    assert abs(r.value - math.pi) < 1e-10


def test_2d_zero():
    r = integrate_2d(lambda x, y: np.zeros_like(x), radius_cut=3.0)
    assert r.value == 0.0
    assert r.error_estimate == 0.0


def test_2d_translation():
    c = (1.3, -0.7)
    shifted = integrate_2d(lambda x, y: np.exp(-((x - c[0]) ** 2 + (y - c[1]) ** 2)), center=c, radius_cut=10.0)
    plain = integrate_2d(lambda x, y: np.exp(-(x * x + y * y)), radius_cut=10.0)
    assert abs(shifted.value - plain.value) < 1e-12


def test_2d_tail_bound_counts_in_error():
    r = integrate_2d(lambda x, y: np.exp(-(x * x + y * y)), radius_cut=10.0, tail_bound=1e-3)
    assert r.error_estimate >= 1e-3
    assert not r.converged


def test_determinism():
    f = lambda x: np.exp(-x) * np.cos(7 * x)
    runs = {integrate_semi_infinite(f, 0.0).value for _ in range(3)}
    assert len(runs) == 1
    g = lambda x, y: np.exp(-(x - 0.2) ** 2 - 2 * y * y) * np.cos(x * y)
    runs2 = {integrate_2d(g, radius_cut=8.0).value for _ in range(3)}
    assert len(runs2) == 1


HONESTY_SUITE = [
    (lambda x: np.exp(x), 0.0, 1.0, math.e - 1),
    (lambda x: 1 / (1 + x * x), 0.0, 1.0, math.pi / 4),
    (lambda x: np.sqrt(x), 0.0, 1.0, 2 / 3),
    (lambda x: np.log(x), 1e-300, 1.0, -1.0),
    (lambda x: np.cos(20 * x), 0.0, 1.0, math.sin(20) / 20),
    (lambda x: x**-0.25, 0.0, 1.0, 4 / 3),
    (lambda x: 1 / (1e-2 + (x - 0.3) ** 2), 0.0, 1.0, 10 * (math.atan(7) + math.atan(3))),
    (lambda x: np.abs(x - 1 / 3), 0.0, 1.0, (1 / 9 + 4 / 9) / 2),
    (lambda x: np.exp(-x * x), -5.0, 5.0, math.sqrt(math.pi) * math.erf(5)),
    (lambda x: x**5 - 2 * x, -1.0, 2.0, (64 - 1) / 6 - 3),
]


@pytest.mark.parametrize("tol", [1e-4, 1e-7, 1e-10])
def test_error_honesty(tol):
    honest = 0
    for f, lo, hi, exact in HONESTY_SUITE:
        r = integrate_1d(f, lo, hi, abs_tol=1e-300, rel_tol=tol)
        true_err = abs(r.value - exact)
        if true_err <= 10 * r.error_estimate + 4 * np.finfo(float).eps * abs(exact):
            honest += 1
    assert honest / len(HONESTY_SUITE) >= 0.95


@settings(max_examples=30, deadline=None)
@given(
    alpha=st.floats(-5, 5, allow_nan=False),
    beta=st.floats(-5, 5, allow_nan=False),
    w=st.floats(0.1, 10.0),
)
def test_linearity(alpha, beta, w):
    f = lambda x: np.exp(-w * x)
    g = lambda x: np.sin(w * x) ** 2
    combo = integrate_1d(lambda x: alpha * f(x) + beta * g(x), 0.0, 2.0)
    sep = alpha * integrate_1d(f, 0.0, 2.0).value + beta * integrate_1d(g, 0.0, 2.0).value
    assert abs(combo.value - sep) <= 1e-9 * (abs(alpha) + abs(beta) + 1)


def test_compensated_sum():
    vals = [1e16, 1.0, -1e16, 1.0]
    assert csum(vals) == 2.0
    assert csum([1 + 1j, 2 - 3j]) == 3 - 2j
