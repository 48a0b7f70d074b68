"""Growth classes of coefficient grids, bounded families and convergent nets.

Classes, from most to least restrictive:

    rapidly-decreasing-exp   e^{p|k|}(1+|n|)^p |c_{k,n}| bounded for every p
    rapidly-decreasing       (1+|k|+|n|)^p |c_{k,n}| bounded for every p
    polynomial               |c_{k,n}| <= C (1+|k|+|n|)^tau
    exp-pol                  |c_{k,n}| <= C e^{tau|k|}(1+|n|)^tau
    unclassified             none of the above on the available range

On a finite grid "bounded" can only mean "not growing towards the edge of the
range", and "every p" means p = 1..4.  Values below a relative noise floor are
treated as zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import CapabilityError, ConfigurationError, UsageError
from .model import CoefficientGrid, Lattice, SignalModel, Window, require_same_lattice

CLASSES = ("rapidly-decreasing-exp", "rapidly-decreasing", "polynomial", "exp-pol", "unclassified")
MIN_SHELLS = 8
NOISE_FLOOR = 1e-12
TEST_ORDERS = (1, 2, 3, 4)


def k1_seminorm(phi: Window | SignalModel, p: int, grid=None) -> float:
    """max over grid points x and orders j <= p of e^{p|x|} |phi^{(j)}(x)|.

    Only a lower bound for the true supremum; the default grid is [-5, 5]
    with step 0.01.
    """
    if p < 0:
        raise ConfigurationError("seminorm order must be non-negative")
    p_max = getattr(phi, "p_max", 4)
    if p > p_max:
        raise CapabilityError(f"derivatives of order {p} are not available (p_max={p_max})")
    x = np.arange(-500, 501) * 0.01 if grid is None else np.asarray(grid, dtype=float)
    w = np.exp(p * np.abs(x))
    best = 0.0
    for j in range(p + 1):
        d = phi(x) if j == 0 else phi.derivative(x, j)
        best = max(best, float(np.max(w * np.abs(d))))
    return best


@dataclass(frozen=True)
class GrowthEstimate:
    cls: str
    tau: float
    residual: float
    slopes: dict = field(default_factory=dict, compare=False)
    tests: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"class": self.cls, "tau": self.tau, "residual": self.residual,
                "slopes": self.slopes, "tests": self.tests}


def fittable(lat: Lattice) -> bool:
    nk = len(np.unique(np.abs(lat.ks)))
    nn = len(np.unique(np.abs(lat.ns)))
    return nk >= MIN_SHELLS and nn >= MIN_SHELLS


@dataclass
class _Fit:
    slope: float
    se: float
    outer_slope: float
    residual: float
    n: int
    inner_slope: float = math.nan

    def convex(self) -> bool:
        # grows faster than the model allows (upward curvature); a
        # non-increasing tail never does
        if self.outer_slope <= 0:
            return False
        slack = 0.1 * max(1.0, abs(self.slope)) + 3.0 * self.se
        if self.outer_slope > self.slope + slack:
            return True
        # a strongly bending profile inflates the global standard error, so
        # also compare the two halves directly
        return self.inner_slope > 0 and self.outer_slope > 1.5 * self.inner_slope + 1.0


def _fit(x: np.ndarray, y: np.ndarray) -> _Fit | None:
    if x.size < 3 or np.ptp(x) == 0:
        return None
    r = stats.linregress(x, y)
    resid = float(np.sqrt(np.mean((y - (r.slope * x + r.intercept)) ** 2)))
    half = x >= np.median(x)
    if half.sum() >= 3 and np.ptp(x[half]) > 0:
        outer = float(stats.linregress(x[half], y[half]).slope)
    else:
        outer = float(r.slope)
    low = x <= np.median(x)
    if low.sum() >= 3 and np.ptp(x[low]) > 0:
        inner = float(stats.linregress(x[low], y[low]).slope)
    else:
        inner = float(r.slope)
    se = float(r.stderr) if math.isfinite(r.stderr) else 0.0
    return _Fit(float(r.slope), se, outer, resid, int(x.size), inner)


def _profile(index: np.ndarray, mags: np.ndarray, mask: np.ndarray):
    """Maximum of mags over each level set of index, restricted to mask."""
    levels = np.unique(index[mask])
    vals = np.array([mags[mask & (index == s)].max() for s in levels])
    return levels.astype(float), vals


def _index_planes(lat: Lattice) -> tuple[np.ndarray, np.ndarray]:
    K = np.abs(lat.ks)[:, None] * np.ones(lat.shape[1], int)[None, :]
    N = np.ones(lat.shape[0], int)[:, None] * np.abs(lat.ns)[None, :]
    return K, N


def _signal_mask(mags: np.ndarray, outer: np.ndarray) -> tuple[np.ndarray, float]:
    """Nodes above the noise floor, and the reference magnitude.

    The floor is relative to the inner part of the grid, so that a grid that
    grows enormously towards its edge does not push its own centre below it.
    """
    inner = mags[~outer]
    ref = float(inner.max()) if inner.size and inner.max() > 0 else float(mags.max())
    return mags > NOISE_FLOOR * ref, ref


def _edge_bounded(weighted: np.ndarray, mask: np.ndarray, outer: np.ndarray) -> bool:
    inner_vals = weighted[mask & ~outer]
    outer_vals = weighted[mask & outer]
    if outer_vals.size == 0:
        return True
    if inner_vals.size == 0:
        return False
    return float(outer_vals.max()) <= float(inner_vals.max()) * (1 + 1e-9)


def class_tests(grid: CoefficientGrid) -> tuple[dict, dict]:
    """Run every envelope test; returns (pass flags, fit data)."""
    lat = grid.lattice
    mags = np.abs(grid.values)
    K, N = _index_planes(lat)
    outer = (K >= K.max() / 2) | (N >= N.max() / 2)
    mask, peak = _signal_mask(mags, outer)
    logm = np.log(np.where(mask, mags, 1.0) / peak)

    tests = {}
    tests["rapidly-decreasing-exp"] = all(
        _edge_bounded(logm + p * K + p * np.log1p(N), mask, outer) for p in TEST_ORDERS)
    poly_ok = all(_edge_bounded(logm + p * np.log1p(K + N), mask, outer) for p in TEST_ORDERS)

    kx, ky = _profile(K, logm, mask)
    nx, ny = _profile(N, logm, mask)
    # only diagonal shells that fit entirely inside the index ranges
    complete = (K + N) <= min(K.max(), N.max())
    sx, sy = _profile(K + N, logm, mask & complete)
    fk = _fit(kx, ky)
    fn = _fit(np.log1p(nx), ny)
    fd = _fit(np.log1p(sx), sy)

    def nonconvex(f):
        return f is None or not f.convex()

    # faster than any power: the log-log diagonal profile bends downward, or
    # everything dies out before the outer half of the range
    steepening = fd is None or fd.outer_slope < fd.slope - 0.1 * max(1.0, abs(fd.slope)) - 3 * fd.se
    tests["rapidly-decreasing"] = poly_ok and (not np.any(mask & outer) or steepening)
    tests["polynomial"] = nonconvex(fd)
    tests["exp-pol"] = nonconvex(fk) and nonconvex(fn)
    # the spaces are nested, so a pass propagates to every larger class
    tests["rapidly-decreasing"] |= tests["rapidly-decreasing-exp"]
    tests["polynomial"] |= tests["rapidly-decreasing"]
    tests["exp-pol"] |= tests["polynomial"]
    fits = {"k": fk, "n": fn, "diag": fd}
    return tests, fits


def classify_grid_growth(grid: CoefficientGrid) -> GrowthEstimate:
    if not fittable(grid.lattice):
        raise ConfigurationError(
            f"ranges too small for fitting (need >= {MIN_SHELLS} shells in each index)")
    if not np.any(grid.values != 0):
        return GrowthEstimate("rapidly-decreasing", 0.0, 0.0)
    tests, fits = class_tests(grid)
    fk, fn, fd = fits["k"], fits["n"], fits["diag"]
    slopes = {name: (None if f is None else {"slope": f.slope, "se": f.se, "outer_slope": f.outer_slope})
              for name, f in fits.items()}

    def exp_pol_tau():
        cands = [(f.slope, f.se, f.residual) for f in (fk, fn) if f is not None]
        if not cands:
            return 0.0, 0.0
        s, se, res = max(cands)
        return s + se, res

    for cls in CLASSES[:-1]:
        if tests[cls]:
            break
    else:
        cls = "unclassified"
    if cls in ("rapidly-decreasing-exp", "rapidly-decreasing"):
        tau, res = 0.0, (fd.residual if fd is not None else 0.0)
    elif cls == "polynomial":
        tau, res = (fd.slope + fd.se, fd.residual) if fd is not None else (0.0, 0.0)
    elif cls == "exp-pol":
        tau, res = exp_pol_tau()
    else:
        tau, res = math.inf, max((f.residual for f in (fk, fn, fd) if f is not None), default=math.nan)
    return GrowthEstimate(cls, float(tau), float(res), slopes, tests)


# ------------------------------------------------------------- families


@dataclass(frozen=True)
class BoundedResult:
    bounded: bool
    tau: float
    witness: tuple[int, int, int] | None = None
    estimate: GrowthEstimate | None = None


ALLOWED = {
    "exp-pol": ("rapidly-decreasing-exp", "rapidly-decreasing", "polynomial", "exp-pol"),
    "polynomial": ("rapidly-decreasing-exp", "rapidly-decreasing", "polynomial"),
}


def _witness(stack: np.ndarray, lat: Lattice, mode: str) -> tuple[int, int, int]:
    """Node of the largest excess over an envelope fitted on the inner half."""
    mags = np.abs(stack).max(axis=0)
    K, N = _index_planes(lat)
    mask, peak = _signal_mask(mags, (K >= K.max() / 2) | (N >= N.max() / 2))
    logm = np.log(np.where(mask, mags, 1.0) / peak)
    if mode == "polynomial":
        x = np.log1p(K + N).astype(float)
        inner = (K + N) <= (K + N).max() / 2
        lx, ly = _profile(K + N, logm, mask & inner)
        lx = np.log1p(lx)
    else:
        x = K.astype(float)
        inner = K <= K.max() / 2
        lx, ly = _profile(K, logm, mask & inner)
    if lx.size >= 2 and np.ptp(lx) > 0:
        s, c = np.polyfit(lx, ly, 1)
    else:
        s, c = 0.0, 0.0
    excess = np.where(mask, logm - (s * x + c), -np.inf)
    i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
    g = int(np.argmax(np.abs(stack[:, i, j])))
    return int(lat.ks[i]), int(lat.ns[j]), g


def check_bounded_family(grids: Sequence[CoefficientGrid], mode: str = "exp-pol") -> BoundedResult:
    if mode not in ALLOWED:
        raise UsageError(f"mode must be 'exp-pol' or 'polynomial', got {mode!r}")
    if not grids:
        return BoundedResult(True, 0.0)
    lat = require_same_lattice(grids)
    stack = np.stack([np.asarray(g.values) for g in grids])
    env = CoefficientGrid(lat, np.abs(stack).max(axis=0))
    est = classify_grid_growth(env)
    if est.cls in ALLOWED[mode]:
        return BoundedResult(True, est.tau, None, est)
    return BoundedResult(False, est.tau, _witness(stack, lat, mode), est)


# ------------------------------------------------------------- nets


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    status: str  # converged | diverged | inconclusive
    limit_grid: CoefficientGrid | None
    tail_lambdas: np.ndarray = field(repr=False)
    tail_values: np.ndarray = field(repr=False)
    uniform_tau: float = math.nan
    lambda0: float = math.nan
    worst_node: tuple[int, int] | None = None
    max_tail_delta: float = math.nan
    reason: str = ""
    limit_function: np.ndarray | None = field(default=None, repr=False)
    eval_points: np.ndarray | None = field(default=None, repr=False)

    def history(self, k: int, n: int) -> np.ndarray:
        """Tail sequence of c_{k,n} over the second half of the net."""
        lat = self.limit_grid.lattice
        return self.tail_values[:, k - lat.k_range[0], n - lat.n_range[0]]

    def to_dict(self) -> dict:
        return {"converged": self.converged, "status": self.status, "tau": self.uniform_tau,
                "lambda0": self.lambda0, "worst_node": self.worst_node,
                "max_tail_delta": self.max_tail_delta, "reason": self.reason}


def _escaping(net_vals: list[np.ndarray], lat: Lattice) -> bool:
    """Mass that stays O(1) while drifting towards the edge, then vanishes."""
    peaks = np.array([np.abs(v).max() for v in net_vals])
    top = peaks.max()
    if top == 0 or peaks[-1] > 1e-8 * top:
        return False
    strong = [i for i, p in enumerate(peaks) if p >= 0.5 * top]
    if len(strong) < 3:
        return False
    pos = []
    for i in strong:
        a, _ = np.unravel_index(int(np.argmax(np.abs(net_vals[i]))), net_vals[i].shape)
        pos.append(abs(int(lat.ks[a])))
    return all(b >= a for a, b in zip(pos, pos[1:])) and pos[-1] - pos[0] >= 3


def detect_net_convergence(net: Sequence[tuple[float, CoefficientGrid]], mode: str = "exp-pol",
                           node_tol: float = 1e-6, gamma: Window | None = None,
                           eval_points=None) -> ConvergenceReport:
    """Cauchy test over the tail half of the net plus a uniform growth bound.

    With ``gamma`` given, the limit functional sum a_{k,n} M_{bn} T_{ak} gamma is
    sampled at ``eval_points``.
    """
    if len(net) < 4:
        raise UsageError("a net needs at least 4 entries")
    lams = np.array([float(l) for l, _ in net])
    if not np.all(np.diff(lams) > 0):
        raise UsageError("net parameters must be strictly increasing")
    grids = [g for _, g in net]
    lat = require_same_lattice(grids)
    vals = [np.asarray(g.values) for g in grids]
    start = len(net) // 2
    tail = np.stack(vals[start:])
    last = grids[-1]
    scale = float(np.abs(tail).max())
    deltas = np.abs(np.diff(tail, axis=0)) if tail.shape[0] > 1 else np.zeros((1,) + tail.shape[1:])
    node_delta = deltas.max(axis=0)
    i, j = np.unravel_index(int(np.argmax(node_delta)), node_delta.shape)
    worst = (int(lat.ks[i]), int(lat.ns[j]))
    max_delta = float(node_delta.max())
    rel = max_delta / scale if scale > 0 else 0.0
    common = dict(tail_lambdas=lams[start:], tail_values=tail, worst_node=worst,
                  max_tail_delta=rel, lambda0=float(lams[start]))

    if _escaping(vals, lat):
        return ConvergenceReport(False, "inconclusive", last, reason=(
            "mass drifts towards the edge of the index range and leaves it; "
            "a finite section cannot follow it"), **common)
    bound = check_bounded_family(grids[start:], mode)
    if not bound.bounded:
        return ConvergenceReport(False, "diverged", last, uniform_tau=bound.tau,
                                 reason=f"tail family is not uniformly bounded (witness {bound.witness})",
                                 **common)
    if rel > node_tol:
        return ConvergenceReport(False, "diverged", last, uniform_tau=bound.tau,
                                 reason=f"Cauchy test failed: relative tail change {rel:.3g} at node {worst}",
                                 **common)
    limit_fn = None
    t = None
    if gamma is not None and eval_points is not None:
        from .stft import synthesize

        t = np.atleast_1d(np.asarray(eval_points, dtype=float))
        limit_fn, _ = synthesize(last, gamma, lat, t, check_growth=False)
    return ConvergenceReport(True, "converged", last, uniform_tau=bound.tau, reason="",
                             limit_function=limit_fn, eval_points=t, **common)
