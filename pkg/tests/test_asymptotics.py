import math

import numpy as np
import pytest
from scipy import optimize

from gabortauber import catalog as cat
from gabortauber.asymptotics import (AsymptoticConfig, monotone_tauberian, net_schedule,
                                     sasymp_coefficient_limits, solve_asymptote_constants,
                                     tauberian_bound_check, translation_net, verify_sasymptotics,
                                     wiener_condition_check, wiener_tauberian, window_ft_complex)
from gabortauber.comparison import ComparisonFunction
from gabortauber.errors import CapabilityError, ConfigurationError, PreconditionError
from gabortauber.model import Lattice

E1 = ComparisonFunction(1.0, "const:1")
ONE = ComparisonFunction(0.0, "const:1")


def gaussian_model(beta, ns, b, C):
    z = -beta * np.asarray(ns) + 1j * b / (2 * np.pi)
    return C * np.conj(np.exp(-np.pi * z * z))


def test_window_ft_closed_form_vs_quadrature():
    t = np.linspace(-6, 6, 1201)
    sampled = cat.sampled_window(t, np.exp(-np.pi * t**2))
    xi = np.array([-0.5, 0.0, 0.7])
    for b in (0.0, 1.0, 2.0):
        exact = window_ft_complex(cat.gaussian_window(), xi, b)
        np.testing.assert_allclose(exact, np.exp(-np.pi * (xi + 1j * b / (2 * np.pi)) ** 2), rtol=1e-13)
        np.testing.assert_allclose(window_ft_complex(sampled, xi, b), exact, atol=1e-7)


def test_window_ft_capability():
    with pytest.raises(CapabilityError):
        window_ft_complex(cat.cauchy_window(), 0.0, 1.0)
    assert window_ft_complex(cat.cauchy_window(), 0.0, 0.0) == pytest.approx(math.pi)


def test_solve_constants_recovers_model(gauss):
    ns = np.arange(-6, 7)
    C, b = 0.7 - 0.2j, 1.3
    a = dict(zip(ns.tolist(), gaussian_model(0.5, ns, b, C)))
    fit = solve_asymptote_constants(a, gauss, 0.5)
    assert fit.b == pytest.approx(b, abs=1e-6)
    assert abs(fit.C - C) < 1e-6
    assert fit.residual < 1e-8


def test_solve_constants_alias_tie_break(gauss):
    # with beta = 1 the Gaussian model is 2 pi periodic in b
    ns = np.arange(-4, 5)
    a = dict(zip(ns.tolist(), gaussian_model(1.0, ns, 1.0, 1.0)))
    assert solve_asymptote_constants(a, gauss, 1.0).b == pytest.approx(1.0, abs=1e-6)
    alias = solve_asymptote_constants(a, gauss, 1.0, b_hint=-5.0)
    assert alias.b == pytest.approx(1.0 - 2 * math.pi, abs=1e-6)
    # 1 - 2 pi, 1 and 1 + 2 pi all lie in [-8, 8]
    assert len(alias.candidates) == 3


def test_solve_constants_degenerate(gauss):
    assert solve_asymptote_constants({-1: 0j, 0: 0j, 1: 0j}, gauss, 0.5).C == 0
    with pytest.raises(PreconditionError):
        solve_asymptote_constants({-1: 1.0, 0: 0j, 1: 1.0}, gauss, 0.5)
    with pytest.raises(ConfigurationError):
        solve_asymptote_constants({1: 1.0}, gauss, 0.5)


def test_limits_for_exponential_step(gauss):
    lat = Lattice(0.5, 0.5, (0, 0), (-4, 4))
    res = sasymp_coefficient_limits(cat.exp_step(1.0), gauss, lat, E1)
    got = np.array([res.limits[n].value for n in range(-4, 5)])
    np.testing.assert_allclose(got, gaussian_model(0.5, np.arange(-4, 5), 1.0, 1.0), atol=1e-10)
    assert all(e.converged for e in res.limits.values())


def test_limits_flag_growth(gauss):
    lat = Lattice(0.5, 0.5, (0, 0), (-2, 2))
    res = sasymp_coefficient_limits(cat.staircase(), gauss, lat, ONE)
    assert not res.limits[0].converged


def test_bound_check(gauss):
    lat = Lattice(0.5, 0.5, (0, 0), (-4, 4))
    assert tauberian_bound_check(cat.exp_step(1.0), gauss, lat, E1).ok
    bad = tauberian_bound_check(cat.exp_step(2.0), gauss, lat, E1)
    assert not bad.ok and bad.witness[0] > 0


def test_translation_net_values():
    net = translation_net(cat.exp_step(1.0), E1, [1.0, 2.0])
    t = np.array([0.5])
    assert net[1][1](t)[0] == pytest.approx(math.exp(0.5))
    with pytest.raises(ConfigurationError):
        translation_net(cat.heaviside(), ONE, [2.0, 1.0])


def test_net_schedule_passes_lattice_reach(gauss, lat_half):
    hs = net_schedule(gauss, lat_half, E1, cat.exp_step(1.0))
    assert hs[len(hs) // 2] > 0.5 * 40


def test_precondition_on_lattice(gauss):
    with pytest.raises(PreconditionError):
        verify_sasymptotics(cat.heaviside(), gauss, Lattice(1, 1, (-4, 4), (-4, 4)), ONE)


def test_report_serialisation(gauss, lat_half):
    rep = verify_sasymptotics(cat.zero(), gauss, lat_half, E1)
    assert rep.verdict == "s-asymptotic" and rep.C == 0
    d = rep.to_dict()
    assert set(d) >= {"verdict", "C", "b", "tau", "theorem", "a_n", "diagnostics"}
    assert "route_agreement" in d["diagnostics"] and "solve_residual" in d["diagnostics"]
    rows = list(rep.trajectory_rows())
    assert len(rows) == rep.xs.size * lat_half.shape[1]


def test_positive_verdict_implies_hypotheses(gauss, lat_half):
    rep = verify_sasymptotics(cat.exp_step(0.5), gauss, lat_half, ComparisonFunction(0.5, "const:2"))
    assert rep.verdict == "s-asymptotic"
    assert rep.solve_residual <= AsymptoticConfig().solve_tol
    assert all(e.converged for e in rep.a_n.values())
    assert rep.diagnostics["bound_check"]["ok"]
    assert rep.C == pytest.approx(0.5, rel=1e-6) and rep.b == pytest.approx(0.5, rel=1e-6)


def test_monotone_preconditions(gauss):
    t = np.linspace(-4, 4, 401)
    hat = cat.sampled_window(t, (1 - 2 * np.pi * t**2) * np.exp(-np.pi * t**2))
    with pytest.raises(PreconditionError):
        monotone_tauberian(cat.exp_step(1.0), hat, E1)
    with pytest.raises(PreconditionError):
        monotone_tauberian(cat.gaussian(center=3.0), gauss, ONE)
    assert monotone_tauberian(cat.heaviside(), gauss, ComparisonFunction(-1.0)).verdict == "rejected"


def test_monotone_heaviside(gauss):
    rep = monotone_tauberian(cat.heaviside(), gauss, ONE)
    assert rep.verdict == "s-asymptotic"
    assert rep.C == pytest.approx(1.0, rel=1e-8)


def test_wiener_check_gaussian_and_cauchy(gauss):
    for b in (0.0, 1.0, 2.0):
        assert wiener_condition_check(gauss, b).holds
    assert wiener_condition_check(cat.cauchy_window(), 0.0).holds


def test_wiener_witness_matches_root():
    w = cat.two_gaussian_window()
    root = optimize.brentq(lambda z: w.complex_ft(np.array([z]))[0].real, 0.5, 1.2)
    res = wiener_condition_check(w, 0.0)
    assert not res.holds
    assert res.witness == pytest.approx(root, abs=1e-6)


def test_wiener_tauberian_rejects_bad_window(lat_half):
    rep = wiener_tauberian(cat.exp_step(1.0), cat.two_gaussian_window(), lat_half, ONE, 1.0)
    assert rep.verdict == "rejected"
    assert rep.diagnostics["wiener"]["witness"] == pytest.approx(0.81358, abs=1e-4)
