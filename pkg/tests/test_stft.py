import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from gabortauber import catalog as cat
from gabortauber.errors import UsageError
from gabortauber.model import CoefficientGrid, Lattice, modulate, translate
from gabortauber.stft import (dual_pairing, gabor_coefficients, shell_contributions, stft_point,
                              stft_row, synthesize)

from conftest import gaussian_self_stft


def mp_stft(f, psi, x, xi, lo, hi):
    """High-precision oracle; f and psi are mpmath-callable."""
    mpmath.mp.dps = 30
    re = mpmath.quad(lambda t: f(t) * psi(t - x) * mpmath.cos(2 * mpmath.pi * xi * t), [lo, x, hi])
    im = mpmath.quad(lambda t: -f(t) * psi(t - x) * mpmath.sin(2 * mpmath.pi * xi * t), [lo, x, hi])
    return complex(re, im)


def test_gaussian_against_high_precision_oracle(gauss):
    g = lambda t: mpmath.exp(-mpmath.pi * t * t)
    for x, xi in [(0.0, 0.0), (0.7, -1.2), (-1.5, 2.0)]:
        ref = mp_stft(g, g, x, xi, -12, 12)
        assert abs(stft_point(cat.gaussian(), gauss, x, xi) - ref) < 1e-12
        assert abs(ref - gaussian_self_stft(x, xi)) < 1e-15


def test_exp_step_against_oracle(gauss):
    f = lambda t: mpmath.exp(t) if t >= 0 else mpmath.mpf(0)
    g = lambda t: mpmath.exp(-mpmath.pi * t * t)
    for x, xi in [(0.2, 0.5), (3.0, -1.0)]:
        ref = mp_stft(f, g, x, xi, 0, x + 10)
        got = stft_point(cat.exp_step(1.0), gauss, x, xi)
        assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


def test_point_masses_exact(gauss):
    pm = cat.point_masses([(0.3, 2.0), (-1.0, 1j)])
    x, xi = 0.5, 0.7
    ref = 2.0 * math.exp(-math.pi * 0.04) * np.exp(-2j * np.pi * xi * 0.3) \
        + 1j * math.exp(-math.pi * 2.25) * np.exp(2j * np.pi * xi)
    assert abs(stft_point(pm, gauss, x, xi) - ref) < 1e-15


def test_zero_signal(gauss, small_lat):
    g = gabor_coefficients(cat.zero(), gauss, small_lat)
    assert not np.any(g.values)


def test_demodulated_row(gauss):
    f = cat.gaussian(center=0.4)
    xis = np.array([-1.0, 0.5])
    a = stft_row(f, gauss, 2.0, xis)
    b = stft_row(f, gauss, 2.0, xis, demodulated=True)
    np.testing.assert_allclose(a, b * np.exp(-4j * np.pi * xis), atol=1e-15)


@given(st.floats(-2, 2), st.floats(-1, 1), st.floats(-2, 2), st.floats(-2, 2))
def test_covariance(y, eta, x, xi):
    # V(M_eta T_y f)(x, xi) = e^{-2 pi i (xi - eta) y} V f(x - y, xi - eta)
    psi = cat.gaussian_window()
    f = cat.gaussian(width=0.8)
    lhs = stft_point(modulate(translate(f, y), eta), psi, x, xi)
    rhs = np.exp(-2j * np.pi * (xi - eta) * y) * stft_point(f, psi, x - y, xi - eta)
    assert abs(lhs - rhs) < 1e-11


def test_grid_orientation_and_threads(gauss):
    lat = Lattice(0.5, 0.5, (-4, 4), (-3, 3))
    g1 = gabor_coefficients(cat.gaussian(), gauss, lat)
    g2 = gabor_coefficients(cat.gaussian(), gauss, lat, threads=3)
    np.testing.assert_array_equal(g1.values, g2.values)
    assert abs(g1.at(2, -1) - gaussian_self_stft(1.0, -0.5)) < 1e-13


def test_synthesis_shape_and_tail(gauss, small_lat):
    grid = gabor_coefficients(cat.gaussian(), gauss, small_lat)
    vals, tail = synthesize(grid, gauss, eval_points=np.linspace(-1, 1, 5))
    assert vals.shape == (5,)
    assert tail.shell == 20 and tail.relative < 1e-10


def test_synthesis_refuses_unclassified_grid(gauss, small_lat):
    K = np.abs(small_lat.ks)[:, None]
    grid = CoefficientGrid(small_lat, np.exp(K.astype(float) ** 2 / 8) * np.ones(small_lat.shape))
    with pytest.raises(UsageError):
        synthesize(grid, gauss, eval_points=[0.0])
    with pytest.raises(UsageError):
        synthesize(grid, gauss, lat=Lattice(1, 1, (-20, 20), (-8, 8)), eval_points=[0.0])


def test_shell_contributions_decay(gauss, small_lat):
    grid = gabor_coefficients(cat.gaussian(), gauss, small_lat)
    sc = shell_contributions(grid, gauss, np.linspace(-1, 1, 5), axis="k")
    assert sc[0] > sc[10] > sc[20]


def test_dual_pairing_reflects_frequencies():
    lat = Lattice(1, 1, (-1, 1), (-2, 2))
    a = np.zeros(lat.shape, complex)
    b = np.zeros(lat.shape, complex)
    a[1, 3] = 2.0       # (k=0, n=1)
    b[1, 1] = 3.0       # (k=0, n=-1)
    r = dual_pairing(CoefficientGrid(lat, a), CoefficientGrid(lat, b))
    assert r.value == 6.0
