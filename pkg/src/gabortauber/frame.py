"""Gabor frames: lattice validation, frame operator, bounds, canonical dual.

The dual window and the power iterations work with the Walnut form of the
frame operator.  Summing over all frequency shifts by Poisson summation gives

    S f(t) = (1/beta) sum_m G_m(t) f(t - m/beta),
    G_m(t) = sum_k psi(t - alpha k) conj(psi(t - m/beta - alpha k)),

so S only couples points of t + Z/beta.  On a uniform grid of step
h = 1/(beta M) it is therefore applied exactly, without truncating the
frequency index.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .catalog import gaussian, gaussian_mixture, sampled_window
from .errors import (CapabilityError, ConfigurationError, ConvergenceError, NumericError,
                     PreconditionError, UsageError)
from .model import Lattice, SignalModel, Window
from .quadrature import QuadratureSpec, fourier_integral
from .stft import DEFAULT_QUAD, gabor_coefficients, synthesize

log = logging.getLogger(__name__)

GAUSSIAN_NAMES = ("gaussian",)


@dataclass(frozen=True)
class LatticeVerdict:
    status: str  # "ok" | "ok-with-warning" | "rejected"
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "rejected"


def validate_lattice(psi: Window, lat: Lattice) -> LatticeVerdict:
    ab = lat.density
    if psi.name in GAUSSIAN_NAMES:
        if ab < 1:
            return LatticeVerdict("ok", f"Gaussian window with alpha*beta={ab:g} < 1")
        return LatticeVerdict("rejected", f"Gaussian windows give a frame iff alpha*beta < 1 (got {ab:g})")
    if ab >= 1:
        return LatticeVerdict(
            "rejected",
            f"alpha*beta={ab:g} >= 1: a smooth, well-localised window cannot give a frame (Balian-Low)")
    return LatticeVerdict("ok-with-warning",
                          f"alpha*beta={ab:g} < 1 is necessary but not sufficient for window {psi.name!r}")


def _require_frame(psi: Window, lat: Lattice, force: bool) -> LatticeVerdict:
    verdict = validate_lattice(psi, lat)
    if not verdict.ok and not force:
        raise PreconditionError(verdict.reason)
    return verdict


# ------------------------------------------------------------- frame operator


def frame_operator_apply(psi: Window, lat: Lattice, f: SignalModel, eval_points,
                         q: QuadratureSpec = DEFAULT_QUAD, threads: int = 1) -> np.ndarray:
    """Samples of the truncated S f = sum V_psi f(ak, bn) M_bn T_ak psi."""
    grid = gabor_coefficients(f, psi, lat, q, threads=threads)
    vals, _ = synthesize(grid, psi, lat, eval_points, check_growth=False)
    return vals


def frame_inner(psi: Window, lat: Lattice, f: SignalModel, g: SignalModel | None = None,
                q: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """<S f, g> = sum c_{k,n}(f) conj(c_{k,n}(g)); with g omitted, <S f, f>."""
    cf = gabor_coefficients(f, psi, lat, q).values
    cg = cf if g is None else gabor_coefficients(g, psi, lat, q).values
    return complex(np.sum(cf * np.conj(cg)))


def l2_norm_sq(f: SignalModel, q: QuadratureSpec = DEFAULT_QUAD, lo: float = -60.0,
               hi: float = 60.0) -> float:
    if f.is_point_masses:
        raise CapabilityError("point masses have no L2 norm")
    lo, hi = max(lo, f.support[0]), min(hi, f.support[1])
    brk = f.breaks(lo, hi)
    return float(fourier_integral(lambda t: np.abs(f(t)) ** 2, lo, hi, [0.0], q, breaks=brk)[0].real)


class WalnutOperator:
    """Frame operator on the grid t_j = j h, |t_j| <= T, h = 1/(beta M)."""

    def __init__(self, psi: Window, alpha: float, beta: float, T: float, h_max: float,
                 k_range: tuple[int, int] | None = None, tol: float = 1e-16):
        self.alpha, self.beta = alpha, beta
        self.M = int(math.ceil(1.0 / (beta * h_max) - 1e-9))
        self.h = 1.0 / (beta * self.M)
        J = int(math.ceil(T / self.h))
        self.t = np.arange(-J, J + 1) * self.h
        R = psi.radius(tol)
        if k_range is None:
            k_range = (int(math.floor((-T - R) / alpha)), int(math.ceil((T + R) / alpha)))
        ks = np.arange(k_range[0], k_range[1] + 1)
        mmax = int(math.ceil(2 * R * beta)) + 1
        self.ms = np.arange(-mmax, mmax + 1)
        t = self.t
        G = []
        for m in self.ms:
            acc = np.zeros(t.size, dtype=complex)
            for k in ks:
                acc += psi(t - alpha * k) * np.conj(psi(t - m / beta - alpha * k))
            G.append(acc)
        self.G = np.array(G)
        self.psi_samples = np.asarray(psi(t), dtype=complex)

    def __call__(self, g: np.ndarray) -> np.ndarray:
        out = np.zeros(g.shape, dtype=complex)
        n = g.size
        for Gm, m in zip(self.G, self.ms):
            s = int(m) * self.M
            if abs(s) >= n:
                continue
            sh = np.zeros(n, dtype=complex)
            if s >= 0:
                sh[s:] = g[:n - s]
            else:
                sh[:s] = g[-s:]
            out += Gm * sh
        return out / self.beta


# ------------------------------------------------------------- frame bounds


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float
    truncation: Lattice
    method: str
    probe_min: float = math.nan
    probe_max: float = math.nan
    power_min: float = math.nan
    power_max: float = math.nan
    quotients: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if not (0 < self.A <= self.B):
            raise NumericError(f"invalid frame bound estimates A={self.A:g}, B={self.B:g}")

    @property
    def ratio(self) -> float:
        return self.A / self.B

    def to_dict(self) -> dict:
        return {"A": self.A, "B": self.B, "method": self.method, "truncation": self.truncation.to_dict(),
                "probe_min": self.probe_min, "probe_max": self.probe_max,
                "power_min": self.power_min, "power_max": self.power_max}


def _window_freq_radius(psi: Window, tol: float = 1e-10) -> float:
    if psi.complex_ft is not None:
        xi = np.linspace(0, 40, 4001)
        m = np.maximum(np.abs(psi.complex_ft(xi)), np.abs(psi.complex_ft(-xi)))
        tail = np.maximum.accumulate(m[::-1])[::-1]
        idx = np.nonzero(tail <= tol * m[0])[0]
        return float(xi[idx[0]]) if idx.size else 40.0
    # smooth windows: the derivative ratio gives a crude bandwidth scale
    t = np.linspace(-10, 10, 4001)
    d = np.abs(psi.derivative(t, 1)).max() / max(np.abs(psi(t)).max(), 1e-300)
    return float(min(40.0, 3.0 * d))


def interior_region(psi: Window, lat: Lattice, margin: float = 1.0) -> tuple[tuple, tuple]:
    """Time and frequency intervals well inside the lattice coverage."""
    R = psi.radius(1e-10)
    F = _window_freq_radius(psi)
    t0, t1 = lat.time_coverage()
    f0, f1 = lat.freq_coverage()
    return (t0 + R + margin, t1 - R - margin), (f0 + F + margin, f1 - F - margin)


def make_probes(psi: Window, lat: Lattice, count: int, seed: int = 0) -> list[SignalModel]:
    """Random time- and band-limited Gaussian bumps inside the lattice coverage."""
    rng = np.random.default_rng(seed)
    (ta, tb), (fa, fb) = interior_region(psi, lat)
    if ta > tb:
        c = 0.5 * sum(lat.time_coverage())
        ta = tb = c
    if fa > fb:
        c = 0.5 * sum(lat.freq_coverage())
        fa = fb = c
    probes = []
    for _ in range(count):
        ncomp = int(rng.integers(1, 4))
        comps = []
        for _ in range(ncomp):
            w = float(rng.uniform(0.7, 1.4))
            comps.append({
                "amplitude": float(rng.uniform(0.3, 1.0)) * (1 if rng.random() < 0.5 else -1),
                "center": float(rng.uniform(ta, tb)),
                "width": w,
                "freq": float(rng.uniform(fa, fb)),
            })
        probes.append(gaussian_mixture(comps) if ncomp > 1 else gaussian(**comps[0]))
    return probes


def _probe_extent(f: SignalModel) -> tuple[float, float]:
    # coarse time extent from sampling |f|
    t = np.linspace(-200, 200, 80001)
    v = np.abs(f(t))
    big = np.nonzero(v > 1e-14 * v.max())[0]
    return float(t[big[0]]), float(t[big[-1]])


def rayleigh_quotient(psi: Window, lat: Lattice, f: SignalModel,
                      q: QuadratureSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """(sum |c_{k,n}|^2, ||f||^2) with the k-range clipped to where f lives."""
    lo, hi = _probe_extent(f)
    R = psi.radius(q.tail_tol)
    k0 = max(lat.k_range[0], int(math.floor((lo - R) / lat.alpha)))
    k1 = min(lat.k_range[1], int(math.ceil((hi + R) / lat.alpha)))
    nrm = l2_norm_sq(f, q, lo - 1, hi + 1)
    if k0 > k1:
        return 0.0, nrm
    sub = Lattice(lat.alpha, lat.beta, (k0, k1), lat.n_range)
    c = gabor_coefficients(f, psi, sub, q).values
    return float(np.sum(np.abs(c) ** 2)), nrm


def power_extremes(op, n: int, mask: np.ndarray, iterations: int = 400, rtol: float = 1e-10,
                   seed: int = 0) -> tuple[float, float]:
    """Largest and smallest Rayleigh quotients of a positive operator restricted by ``mask``.

    The largest comes from plain power iteration; the smallest from power
    iteration on (B' I - S) with B' slightly above the largest.
    """
    rng = np.random.default_rng(seed)

    def run(apply):
        v = rng.standard_normal(n) * mask
        v = v / np.linalg.norm(v)
        mu = math.nan
        for _ in range(iterations):
            w = apply(v) * mask
            new = float(np.vdot(v, w).real)
            nw = np.linalg.norm(w)
            if nw == 0:
                return 0.0
            v = w / nw
            if not math.isnan(mu) and abs(new - mu) <= rtol * max(abs(new), 1e-300):
                return new
            mu = new
        return mu

    top = run(op)
    shift = 1.01 * top
    low = shift - run(lambda v: shift * v - op(v))
    return low, top


def estimate_frame_bounds(psi: Window, lat: Lattice, probes: int = 50,
                          q: QuadratureSpec = DEFAULT_QUAD, seed: int = 0,
                          force: bool = False, power_iterations: int = 400) -> FrameBounds:
    """Heuristic frame bounds from probe Rayleigh quotients and power iteration."""
    _require_frame(psi, lat, force)
    if probes < 1:
        raise ConfigurationError("need at least one probe")
    quotients = []
    for f in make_probes(psi, lat, probes, seed):
        num, den = rayleigh_quotient(psi, lat, f, q)
        if den > 1e-12:
            quotients.append(num / den)
    if not quotients:
        raise ConfigurationError("all probes are numerically degenerate")
    pmin, pmax = min(quotients), max(quotients)
    (ta, tb), _ = interior_region(psi, lat)
    wmin = wmax = math.nan
    method = "probes"
    if tb - ta > 2.0:
        mid, half = 0.5 * (ta + tb), 0.5 * (tb - ta)
        op = WalnutOperator(psi, lat.alpha, lat.beta, half + psi.radius(1e-16), 1 / 32,
                            k_range=lat.k_range)
        op_t = op.t
        mask = (np.abs(op_t - (mid - 0.0)) <= half).astype(float)
        wmin, wmax = power_extremes(op, op_t.size, mask, power_iterations, seed=seed)
        method = "probes+power"
    A = min(pmin, wmin) if not math.isnan(wmin) else pmin
    B = max(pmax, wmax) if not math.isnan(wmax) else pmax
    if not A > 1e-12 * B:
        raise NumericError(f"lower frame bound not resolved (A={A:.3g}); the system may not be a frame")
    return FrameBounds(A, B, lat, method, pmin, pmax, wmin, wmax, tuple(quotients))


# ------------------------------------------------------------- dual window


@dataclass(frozen=True)
class DualWindow:
    base: Window
    alpha: float
    beta: float
    t: np.ndarray = field(repr=False)
    gamma_samples: np.ndarray = field(repr=False)
    iterations: int = 0
    residual: float = math.nan
    history: tuple[float, ...] = field(default=(), repr=False)
    bounds: tuple[float, float] = (math.nan, math.nan)

    def __post_init__(self):
        object.__setattr__(self, "_window",
                           sampled_window(self.t, self.gamma_samples, name=f"dual({self.base.name})"))

    @property
    def window(self) -> Window:
        """gamma as a cubic-spline window, zero outside the tabulated range."""
        return self._window

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "residual": self.residual,
                "iterations": self.iterations, "bounds": {"A": self.bounds[0], "B": self.bounds[1]},
                "window": self.base.id, "extent": float(self.t[-1]), "step": float(self.t[1] - self.t[0])}


def dual_grid_step(alpha: float) -> float:
    return min(alpha / 16.0, 1.0 / 64.0)


def compute_dual_window(psi: Window, lat: Lattice, bounds: FrameBounds | tuple[float, float],
                        tol: float = 1e-8, max_iterations: int = 200, force: bool = False,
                        extent: float | None = None, edge_tol: float = 1e-10) -> DualWindow:
    """Canonical dual gamma = S^{-1} psi by the relaxed frame algorithm.

    gamma_{m+1} = gamma_m + lam (psi - S gamma_m), lam = 2/(A+B), gamma_0 = lam psi.
    The tabulation extent grows until |gamma| < edge_tol (relative) at the edges.
    """
    _require_frame(psi, lat, force)
    A, B = (bounds.A, bounds.B) if isinstance(bounds, FrameBounds) else bounds
    if not (0 < A <= B):
        raise UsageError(f"invalid frame bounds A={A}, B={B}")
    lam = 2.0 / (A + B)
    T = extent if extent is not None else max(8.0, 2.5 * psi.radius(1e-10))
    while True:
        op = WalnutOperator(psi, lat.alpha, lat.beta, T, dual_grid_step(lat.alpha))
        target = op.psi_samples
        g = lam * target
        history = []
        converged = False
        for it in range(max_iterations + 1):
            r = target - op(g)
            res = float(np.max(np.abs(r)))
            history.append(res)
            if not math.isfinite(res):
                break
            if res <= tol:
                converged = True
                break
            if it == max_iterations:
                break
            g = g + lam * r
        if not converged:
            raise ConvergenceError(
                f"dual-window iteration stopped at residual {history[-1]:.3g} after "
                f"{len(history) - 1} iterations (tolerance {tol:g}); bounds A={A:.4g}, B={B:.4g}",
                history=history)
        peak = float(np.max(np.abs(g)))
        edge = float(max(np.abs(g[0]), np.abs(g[-1])))
        if extent is not None or edge <= edge_tol * peak or T >= 64:
            break
        T *= 2
    if psi.is_real:
        g = g.real.astype(complex)
    return DualWindow(psi, lat.alpha, lat.beta, op.t, g, len(history) - 1, history[-1],
                      tuple(history), (A, B))


# ------------------------------------------------------------- reconstruction


@dataclass(frozen=True)
class Reconstruction:
    values: np.ndarray = field(repr=False)
    rel_error: float
    tail_relative: float


def reconstruct(f: SignalModel, psi: Window, dual: DualWindow, lat: Lattice, eval_points,
                q: QuadratureSpec = DEFAULT_QUAD, analysis: str = "psi",
                threads: int = 1) -> Reconstruction:
    """D_gamma C_psi f (analysis='psi') or D_psi C_gamma f (analysis='gamma')."""
    if f.is_point_masses:
        raise CapabilityError("point masses cannot be compared pointwise after reconstruction")
    if not (math.isclose(dual.alpha, lat.alpha) and math.isclose(dual.beta, lat.beta)):
        raise UsageError("dual window was computed for a different lattice")
    gamma = dual.window
    if analysis == "psi":
        an, syn = psi, gamma
    elif analysis == "gamma":
        an, syn = gamma, psi
    else:
        raise UsageError(f"analysis must be 'psi' or 'gamma', got {analysis!r}")
    t = np.atleast_1d(np.asarray(eval_points, dtype=float))
    grid = gabor_coefficients(f, an, lat, q, threads=threads)
    vals, tail = synthesize(grid, syn, lat, t, check_growth=False)
    ref = f(t)
    scale = float(np.max(np.abs(ref))) if t.size else 0.0
    err = float(np.max(np.abs(vals - ref))) if t.size else 0.0
    rel = err / scale if scale > 0 else err
    return Reconstruction(vals, rel, tail.relative)


# ------------------------------------------------------------- dual decay


@dataclass(frozen=True)
class DecayFit:
    rate: float
    flag: str  # exponential | super-exponential | polynomial-only | inconclusive
    residual: float
    fit_range: tuple[float, float]


def verify_dual_decay(dual: DualWindow | tuple[np.ndarray, np.ndarray],
                      floor: float = 1e-13) -> DecayFit:
    """Fit log|gamma| against |t| on the outer half of its numerical support."""
    if isinstance(dual, DualWindow):
        t, g = dual.t, dual.gamma_samples
    else:
        t, g = (np.asarray(a) for a in dual)
    a = np.abs(np.asarray(g))
    peak = float(a.max())
    if peak == 0:
        return DecayFit(math.nan, "inconclusive", math.nan, (0.0, 0.0))
    if a.min() >= 1e-6 * peak:
        return DecayFit(math.nan, "inconclusive", math.nan, (0.0, float(np.max(np.abs(t)))))
    alive = a >= floor * peak
    tsup = float(np.max(np.abs(t[alive])))
    sel = alive & (np.abs(t) >= 0.5 * tsup)
    x, y = np.abs(t[sel]), np.log(a[sel] / peak)
    if x.size < 8 or np.ptp(x) == 0:
        return DecayFit(math.nan, "inconclusive", math.nan, (0.5 * tsup, tsup))
    slope, icpt = np.polyfit(x, y, 1)
    res_exp = float(np.sqrt(np.mean((y - (slope * x + icpt)) ** 2)))
    lx = np.log1p(x)
    ps, pi_ = np.polyfit(lx, y, 1)
    res_pol = float(np.sqrt(np.mean((y - (ps * lx + pi_)) ** 2)))
    # local slopes over the inner and outer quarter of the fit range
    mid = 0.75 * tsup
    inner, outer = x <= mid, x >= mid
    flag = "exponential"
    if inner.sum() >= 4 and outer.sum() >= 4:
        s_in = np.polyfit(x[inner], y[inner], 1)[0]
        s_out = np.polyfit(x[outer], y[outer], 1)[0]
        if s_out < 1.25 * s_in and s_in < 0:
            flag = "super-exponential"
    if flag == "exponential" and res_pol < 0.1 * res_exp:
        flag = "polynomial-only"
    return DecayFit(float(-slope), flag, res_exp, (0.5 * tsup, tsup))
