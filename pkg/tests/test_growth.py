import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gabortauber import catalog as cat
from gabortauber.asymptotics import net_grids, net_schedule
from gabortauber.comparison import ComparisonFunction
from gabortauber.errors import CapabilityError, ConfigurationError, UsageError
from gabortauber.growth import (check_bounded_family, classify_grid_growth, detect_net_convergence,
                                k1_seminorm)
from gabortauber.model import CoefficientGrid, Lattice
from gabortauber.stft import gabor_coefficients

LAT = Lattice(0.5, 0.5, (-20, 20), (-20, 20))
K = np.abs(LAT.ks)[:, None].astype(float)
N = np.abs(LAT.ns)[None, :].astype(float)


def grid(v):
    return CoefficientGrid(LAT, np.broadcast_to(v, LAT.shape).astype(complex))


@pytest.mark.parametrize("values,cls", [
    ((1 + K + N) ** 2, "polynomial"),
    (np.exp(3 * K) * (1 + N) ** 3, "exp-pol"),
    (np.exp(K**2 / 4) + 0 * N, "unclassified"),
    (np.exp(N**1.5) + 0 * K, "unclassified"),
    (np.exp(-(K**2 + N**2) / 3), "rapidly-decreasing-exp"),
    (np.exp(-3 * K) * (1 + N) ** -4, "rapidly-decreasing-exp"),
    (np.exp(-(K + N)), "rapidly-decreasing"),
    ((1 + K + N) ** -1.5, "polynomial"),
])
def test_synthetic_classes(values, cls):
    assert classify_grid_growth(grid(values)).cls == cls


def test_tau_values():
    assert classify_grid_growth(grid((1 + K + N) ** 2)).tau == pytest.approx(2.0, abs=0.05)
    assert classify_grid_growth(grid(np.exp(3 * K) * (1 + N) ** 3)).tau == pytest.approx(3.0, abs=0.05)
    assert math.isinf(classify_grid_growth(grid(np.exp(K**2 / 4) + 0 * N)).tau)


@given(st.floats(-6, 6), st.sampled_from(["poly", "exppol", "gauss"]))
def test_scaling_invariance(log_s, which):
    base = {"poly": (1 + K + N) ** 2, "exppol": np.exp(3 * K) * (1 + N) ** 3,
            "gauss": np.exp(-(K**2 + N**2) / 3)}[which]
    ref = classify_grid_growth(grid(base))
    got = classify_grid_growth(grid(base * 10.0**log_s))
    assert got.cls == ref.cls
    assert got.tau == pytest.approx(ref.tau, abs=1e-6)


def test_gaussian_stft_grid_is_rapidly_decreasing(gauss, small_lat):
    lat = Lattice(0.5, 0.5, (-20, 20), (-10, 10))
    g = gabor_coefficients(cat.gaussian(), gauss, lat)
    assert classify_grid_growth(g).cls == "rapidly-decreasing-exp"


def test_exponential_signal_grid_is_exp_pol(gauss):
    lat = Lattice(0.5, 0.5, (-40, 40), (-16, 16))
    g = gabor_coefficients(cat.exp_step(1.0), gauss, lat)
    est = classify_grid_growth(g)
    assert est.cls == "exp-pol" and est.tau == pytest.approx(0.5, abs=0.05)


def test_too_small_and_zero():
    small = Lattice(1, 1, (-1, 1), (-1, 1))
    with pytest.raises(ConfigurationError, match="ranges too small"):
        classify_grid_growth(CoefficientGrid(small, np.ones((3, 3))))
    assert classify_grid_growth(grid(0 * K * N)).cls == "rapidly-decreasing"


def test_k1_seminorm(gauss):
    x = np.linspace(-5, 5, 1001)
    assert k1_seminorm(gauss, 0) == pytest.approx(1.0)
    ref = max(np.max(np.exp(np.abs(x)) * np.abs(gauss(x))),
              np.max(np.exp(np.abs(x)) * np.abs(gauss.derivative(x, 1))))
    assert k1_seminorm(gauss, 1) == pytest.approx(ref)
    with pytest.raises(CapabilityError):
        k1_seminorm(gauss, 5)


def test_bounded_families():
    fam = [grid(np.exp(-(K**2 + N**2) / 3) * (1 + 0.1 * j)) for j in range(4)]
    assert check_bounded_family(fam, "polynomial").bounded
    assert check_bounded_family([]).bounded
    growing = [grid(np.exp(j * K**2 / 40) + 0 * N) for j in range(1, 5)]
    res = check_bounded_family(growing, "exp-pol")
    assert not res.bounded and res.witness is not None
    assert abs(res.witness[0]) == 20
    with pytest.raises(UsageError):
        check_bounded_family(fam, "weird")


def test_net_convergence_synthetic():
    limit = np.exp(-(K**2 + N**2) / 3)
    net = [(lam, grid(limit * (1 + 1e-9 / lam))) for lam in (1.0, 2.0, 4.0, 8.0, 16.0, 32.0)]
    rep = detect_net_convergence(net, "exp-pol")
    assert rep.converged and rep.status == "converged"
    np.testing.assert_allclose(rep.limit_grid.values, net[-1][1].values)
    assert rep.history(0, 0).shape == (3,)


def test_net_divergence_synthetic():
    base = np.exp(-(K**2 + N**2) / 3)
    net = [(lam, grid(base * (1 + 0.5 * math.sin(lam)))) for lam in (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)]
    rep = detect_net_convergence(net)
    assert not rep.converged and rep.status == "diverged"
    assert rep.worst_node == (0, 0)


def test_net_input_validation():
    g = grid(np.exp(-(K**2 + N**2) / 3))
    with pytest.raises(UsageError):
        detect_net_convergence([(1.0, g)] * 3)
    with pytest.raises(UsageError):
        detect_net_convergence([(1.0, g), (3.0, g), (2.0, g), (4.0, g)])


def test_escaping_point_mass_is_inconclusive(gauss):
    lat = Lattice(0.5, 0.5, (-40, 40), (-8, 8))
    f = cat.point_masses([(0.0, 1.0)])
    c = ComparisonFunction(0.0, "const:1")
    net = net_grids(f, gauss, lat, c, net_schedule(gauss, lat, c, f))
    rep = detect_net_convergence(net)
    assert rep.status == "inconclusive"
    assert "edge" in rep.reason
