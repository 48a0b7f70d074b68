import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gabortauber import catalog as cat
from gabortauber.model import Lattice

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def gauss():
    return cat.gaussian_window()


@pytest.fixture(scope="session")
def lat_half():
    return Lattice(0.5, 0.5, (-40, 40), (-16, 16))


@pytest.fixture(scope="session")
def small_lat():
    return Lattice(0.5, 0.5, (-20, 20), (-8, 8))


def gaussian_self_stft(x, xi):
    x, xi = np.asarray(x, float), np.asarray(xi, float)
    return 2 ** -0.5 * np.exp(-np.pi * (x**2 + xi**2) / 2) * np.exp(-1j * np.pi * x * xi)


@pytest.fixture(scope="session")
def bounds_half(gauss, lat_half):
    from gabortauber.frame import estimate_frame_bounds
    return estimate_frame_bounds(gauss, lat_half, probes=50, seed=0)


@pytest.fixture(scope="session")
def dual_half(gauss, lat_half, bounds_half):
    from gabortauber.frame import compute_dual_window
    return compute_dual_window(gauss, lat_half, bounds_half)


def laurent_symbol_bounds(psi, alpha, beta, n_t0=64, n_theta=256):
    """Exact frame bounds when 1/(alpha*beta) is an integer.

    Then the Walnut coefficients are constant along each coset t0 + Z/beta,
    so the frame operator is a Laurent operator there with symbol
    beta^{-1} sum_m G_m(t0) e^{2 pi i m theta}.
    """
    q = 1.0 / (alpha * beta)
    assert abs(q - round(q)) < 1e-12
    t0 = np.linspace(0, alpha, n_t0, endpoint=False)
    theta = np.linspace(0, 1, n_theta, endpoint=False)
    ks = np.arange(-60, 61)
    ms = np.arange(-12, 13)
    lo, hi = np.inf, -np.inf
    for t in t0:
        G = np.array([np.sum(psi(t - alpha * ks) * np.conj(psi(t - m / beta - alpha * ks))) for m in ms])
        sym = (np.exp(2j * np.pi * np.outer(theta, ms)) @ G).real / beta
        lo, hi = min(lo, sym.min()), max(hi, sym.max())
    return lo, hi


ACCEPTANCE_LINES: dict = {}


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
