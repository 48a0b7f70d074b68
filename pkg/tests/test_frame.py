import math

import numpy as np
import pytest

from gabortauber import catalog as cat
from gabortauber.errors import (CapabilityError, ConvergenceError, NumericError, PreconditionError,
                                UsageError)
from gabortauber.frame import (DualWindow, FrameBounds, WalnutOperator, compute_dual_window,
                               estimate_frame_bounds, frame_inner, frame_operator_apply,
                               l2_norm_sq, make_probes, reconstruct, validate_lattice,
                               verify_dual_decay)
from gabortauber.model import Lattice

from conftest import laurent_symbol_bounds


@pytest.mark.parametrize("ab,status", [(0.25, "ok"), (0.98, "ok"), (1.0, "rejected"), (1.2, "rejected")])
def test_validate_gaussian(gauss, ab, status):
    assert validate_lattice(gauss, Lattice(1.0, ab, (0, 1), (0, 1))).status == status


def test_validate_other_windows():
    w = cat.cauchy_window()
    assert validate_lattice(w, Lattice(0.5, 0.5, (0, 1), (0, 1))).status == "ok-with-warning"
    assert validate_lattice(w, Lattice(1, 1, (0, 1), (0, 1))).status == "rejected"


def test_balian_low_lattice_refused(gauss):
    with pytest.raises(PreconditionError):
        estimate_frame_bounds(gauss, Lattice(1, 1, (-10, 10), (-4, 4)))


def test_walnut_matches_direct_frame_operator(gauss):
    lat = Lattice(0.5, 0.5, (-30, 30), (-16, 16))
    f = cat.gaussian(center=0.3, width=0.8)
    op = WalnutOperator(gauss, 0.5, 0.5, 10.0, 1 / 32, k_range=lat.k_range)
    walnut = op(np.asarray(f(op.t), complex))
    sel = np.abs(op.t) <= 2
    direct = frame_operator_apply(gauss, lat, f, op.t[sel])
    np.testing.assert_allclose(walnut[sel], direct, atol=1e-9)


def test_walnut_is_hermitian(gauss):
    op = WalnutOperator(gauss, 0.5, 0.5, 4.0, 1 / 8)
    n = op.t.size
    M = np.array([op(np.eye(n)[j].astype(complex)) for j in range(n)]).T
    inner = np.abs(op.t) < 2.5
    sub = M[np.ix_(inner, inner)]
    np.testing.assert_allclose(sub, sub.conj().T, atol=1e-12)


def test_frame_inner_matches_norm_of_coefficients(gauss, small_lat):
    f = cat.gaussian(width=1.5)
    val = frame_inner(gauss, small_lat, f)
    assert val.real > 0 and abs(val.imag) < 1e-12


def test_l2_norm():
    assert l2_norm_sq(cat.gaussian()) == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    with pytest.raises(CapabilityError):
        l2_norm_sq(cat.point_masses([(0, 1)]))


def test_probes_are_reproducible(gauss, lat_half):
    a = make_probes(gauss, lat_half, 5, seed=7)
    b = make_probes(gauss, lat_half, 5, seed=7)
    t = np.linspace(-5, 5, 11)
    for p, q in zip(a, b):
        np.testing.assert_array_equal(p(t), q(t))


def test_bounds_match_laurent_symbol(bounds_half, gauss):
    A, B = laurent_symbol_bounds(gauss, 0.5, 0.5)
    assert bounds_half.A == pytest.approx(A, rel=2e-3)
    assert bounds_half.B == pytest.approx(B, rel=2e-3)
    assert A <= bounds_half.A * (1 + 1e-3) and bounds_half.B <= B * (1 + 1e-3)


def test_bounds_other_lattice(gauss):
    lat = Lattice(1 / 3, 1.0, (-60, 60), (-6, 6))
    est = estimate_frame_bounds(gauss, lat, probes=8, seed=1)
    A, B = laurent_symbol_bounds(gauss, 1 / 3, 1.0)
    assert est.A == pytest.approx(A, rel=5e-3)
    assert est.B == pytest.approx(B, rel=5e-3)


def test_frame_bounds_validation(lat_half):
    with pytest.raises(NumericError):
        FrameBounds(2.0, 1.0, lat_half, "probes")


def test_dual_window_properties(dual_half, gauss):
    assert dual_half.residual <= 1e-8
    g = dual_half.window
    # the canonical dual of a real even window is real and even
    t = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(g(t), g(-t), atol=1e-12)
    assert np.max(np.abs(np.imag(dual_half.gamma_samples))) < 1e-12
    assert verify_dual_decay(dual_half).flag in ("exponential", "super-exponential")


def test_dual_biorthogonality(dual_half, gauss):
    # <gamma, M_bn T_ak psi> = (alpha beta) delta_{k0} delta_{n0} (Wexler-Raz)
    g = dual_half.window
    t = np.linspace(-12, 12, 24001)
    dt = t[1] - t[0]
    for k, n in [(0, 0), (0, 4), (2, 0), (1, 1)]:
        val = np.sum(g(t) * np.conj(np.exp(2j * np.pi * 2 * n * t) * gauss(t - 2 * k))) * dt
        expect = 0.25 if (k, n) == (0, 0) else 0.0
        assert abs(val - expect) < 1e-6


def test_dual_wrong_lattice(dual_half, gauss):
    with pytest.raises(UsageError):
        reconstruct(cat.gaussian(), gauss, dual_half, Lattice(0.5, 0.25, (-10, 10), (-5, 5)), [0.0])


def test_dual_stalls_at_critical_density(gauss):
    lat = Lattice(1.0, 1.0, (-24, 24), (-8, 8))
    with pytest.raises(PreconditionError):
        compute_dual_window(gauss, lat, (0.01, 1.7))
    with pytest.raises(ConvergenceError) as err:
        compute_dual_window(gauss, lat, (0.01, 1.7), force=True, max_iterations=60)
    hist = err.value.history
    assert len(hist) > 50 and hist[-1] > 1e-3


def test_decay_fit_flags():
    t = np.linspace(-20, 20, 2001)
    assert verify_dual_decay((t, np.exp(-2 * np.abs(t)))).flag == "exponential"
    assert verify_dual_decay((t, np.exp(-np.pi * t**2 / 4))).flag == "super-exponential"
    assert verify_dual_decay((t, (1 + t * t) ** -3.0)).flag == "polynomial-only"
    assert verify_dual_decay((t, np.ones_like(t))).flag == "inconclusive"
