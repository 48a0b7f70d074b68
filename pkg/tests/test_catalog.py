import math

import numpy as np
import pytest

from gabortauber import catalog as cat
from gabortauber.errors import CapabilityError, ConfigurationError
from gabortauber.model import central_difference


def test_gaussian_window_derivatives_match_finite_differences():
    w = cat.gaussian_window(1.3)
    t = np.linspace(-2, 2, 17)
    for order in (1, 2, 3):
        fd = central_difference(w, t, order, step=1e-3)
        np.testing.assert_allclose(w.derivative(t, order), fd, atol=1e-4 * 10**order)


def test_gaussian_window_transform():
    w = cat.gaussian_window(2.0)
    t = np.linspace(-30, 30, 60001)
    dt = t[1] - t[0]
    for z in (0.0, 0.3):
        num = np.sum(w(t) * np.exp(-2j * np.pi * z * t)) * dt
        assert abs(num - w.complex_ft(np.array([z]))[0]) < 1e-10


def test_two_gaussian_transform_has_real_zero():
    w = cat.two_gaussian_window()
    z0 = math.sqrt(2 / math.pi * math.log(2 * math.sqrt(2)))
    assert abs(w.complex_ft(np.array([z0]))[0]) < 1e-12
    t = np.linspace(-20, 20, 40001)
    num = np.sum(w(t) * np.exp(-2j * np.pi * 0.4 * t)) * (t[1] - t[0])
    assert abs(num - w.complex_ft(np.array([0.4]))[0]) < 1e-10


def test_cauchy_transform_only_on_real_axis():
    w = cat.cauchy_window()
    assert w.complex_ft(np.array([0.0]))[0] == pytest.approx(math.pi)
    with pytest.raises(CapabilityError):
        w.complex_ft(np.array([0.1j]))
    # beyond the closed forms the derivatives come from finite differences
    t = np.array([0.5])
    assert w.derivative(t, 3)[0] == pytest.approx(24 * 0.5 * (1 - 0.25) / 1.25**4, rel=1e-4)


def test_sampled_window_is_zero_outside_and_numeric():
    t = np.linspace(-3, 3, 61)
    w = cat.sampled_window(t, np.exp(-np.pi * t**2))
    assert w.decay_class == "numeric-only"
    assert w(np.array([5.0]))[0] == 0
    assert abs(w(np.array([0.05]))[0] - math.exp(-math.pi * 0.0025)) < 1e-4


@pytest.mark.parametrize("name,kw,expect", [
    ("heaviside", {}, [0, 1, 1]),
    ("exp_step", {"b": 1.0}, [0, 1, math.e]),
    ("staircase", {}, [0, 0, 1]),
    ("constant", {"value": 2.0}, [2, 2, 2]),
])
def test_catalog_signal_values(name, kw, expect):
    f = cat.signal_from_spec({"kind": "catalog", "name": name, **kw})
    np.testing.assert_allclose(f(np.array([-0.5, 0.0, 1.0])), expect)


def test_poly_log_and_sin_exp():
    f = cat.poly_log(2.0)
    assert f(np.array([0.5]))[0] == 0
    assert f(np.array([3.0]))[0] == pytest.approx(9 * math.log(3))
    assert abs(cat.sin_exp()(np.array([0.0]))[0] - math.sin(1)) < 1e-15


def test_spec_combinators():
    f = cat.signal_from_spec({"name": "gaussian", "shift": 1.0, "scale": 2.0, "modulate": 0.5})
    t = np.array([0.0, 1.0, 2.0])
    ref = 2 * np.exp(-np.pi * (t - 1) ** 2) * np.exp(1j * np.pi * t)
    np.testing.assert_allclose(f(t), ref, atol=1e-14)


@pytest.mark.parametrize("spec", [
    {"name": "nope"},
    {"name": "gaussian", "bogus": 1},
    {"kind": "weird"},
    {"kind": "point_masses", "masses": []},
    {"kind": "point_masses", "masses": [[1, 2, 3, 4]]},
])
def test_bad_signal_specs(spec):
    with pytest.raises(ConfigurationError):
        cat.signal_from_spec(spec)


def test_bad_window_spec():
    with pytest.raises(ConfigurationError):
        cat.window_from_spec({"name": "nope"})
    with pytest.raises(ConfigurationError):
        cat.window_from_spec({"name": "gaussian", "shape": 3})


def test_read_table_and_sampled_signal(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("t,value\n0,0\n1,2\n2,0\n")
    f = cat.signal_from_spec({"kind": "sampled", "path": "s.csv"}, tmp_path)
    np.testing.assert_allclose(f(np.array([-1, 0.5, 1, 3])), [0, 1, 2, 0])
    assert 1.0 in f.breaks(0, 2)
    h = cat.signal_from_spec({"kind": "sampled", "path": str(p), "extension": "hold"})
    assert h(np.array([5.0]))[0] == 0.0


def test_read_table_errors_carry_line_numbers(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("t,value\n0,1\n1,abc\n")
    with pytest.raises(ConfigurationError, match=":3:"):
        cat.read_table(p)
    p.write_text("t,value\n0,1,2,3\n")
    with pytest.raises(ConfigurationError, match=":2:"):
        cat.read_table(p)
    with pytest.raises(ConfigurationError):
        cat.read_table(tmp_path / "missing.csv")


def test_sampled_signal_validation():
    with pytest.raises(ConfigurationError):
        cat.sampled_signal([0, 0], [1, 2])
    with pytest.raises(ConfigurationError):
        cat.sampled_signal([0, 1], [1, 2], extension="wrap")
