"""S-asymptotics of signals from their STFT along a time-frequency lattice.

Three detectors are provided:

* ``verify_sasymptotics``: frequency-wise limits
  a_n = lim_x e^{2 pi i beta n x} V_psi f(x, beta n) / c(x) plus a growth
  bound, then a fit of a_n = C conj(psi_hat(-beta n + i b / 2 pi)); cross-checked
  against convergence of the translation net f(. + h)/c(h).
* ``monotone_tauberian``: non-decreasing signals and non-negative windows.
* ``wiener_tauberian``: windows whose shifted transform never vanishes; only
  the n = 0 limit is needed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from .comparison import ComparisonFunction
from .errors import (CapabilityError, ConfigurationError, GaborError, PreconditionError,
                     QuadratureError)
from .frame import DualWindow, validate_lattice
from .growth import ConvergenceReport, detect_net_convergence
from .model import CoefficientGrid, Lattice, SignalModel, Window, translate
from .quadrature import QuadratureSpec, fourier_integral
from .stft import DEFAULT_QUAD, gabor_coefficients, integration_radius, stft_row

log = logging.getLogger(__name__)

VERDICTS = ("s-asymptotic", "inconclusive", "rejected")
LOG_C_MAX = 400.0
LOG_F_MAX = 600.0


@dataclass(frozen=True)
class AsymptoticConfig:
    x_schedule: Optional[tuple[float, ...]] = None
    x_cap: float = 120.0
    tail_fraction: float = 0.25
    cauchy_tol: float = 1e-3
    floor: float = 1e-8
    solve_tol: float = 1e-3
    b_range: tuple[float, float] = (-8.0, 8.0)
    b_hint: Optional[float] = None
    bound_stability: float = 0.10
    cross_validate: bool = True
    net_size: int = 8
    node_tol: float = 1e-6
    dual: Optional[DualWindow] = None
    limit_points: tuple[float, ...] = (-1.0, -0.5, 0.0, 0.5, 1.0)
    quadrature: QuadratureSpec = DEFAULT_QUAD
    threads: int = 1


# ------------------------------------------------------------- nets


def translation_net(f: SignalModel, c: ComparisonFunction, h_schedule: Sequence[float]
                    ) -> list[tuple[float, SignalModel]]:
    """h -> f(. + h) / c(h) for each h."""
    hs = [float(h) for h in h_schedule]
    if any(b <= a for a, b in zip(hs, hs[1:])) or (hs and hs[0] <= 0):
        raise ConfigurationError("h schedule must be positive and increasing")
    return [(h, translate(f, -h).scaled(1.0 / float(c(h)))) for h in hs]


def net_schedule(psi: Window, lat: Lattice, c: ComparisonFunction, f: SignalModel,
                 size: int = 8, q: QuadratureSpec = DEFAULT_QUAD) -> list[float]:
    """h values whose second half lies beyond the reach of the lattice section.

    Once h exceeds alpha*max|k| plus the window radius, every tracked node sees
    f only through its behaviour at +infinity.
    """
    R = integration_radius(f, psi, q)
    reach = lat.alpha * max(abs(lat.k_range[0]), abs(lat.k_range[1])) + R + 1.0
    hs = [reach * 2.0 * (j + 1) / size for j in range(size)]
    return [h for h in hs if _affordable(h + reach, c, f)] or hs[:1]


def _affordable(x: float, c: ComparisonFunction, f: SignalModel) -> bool:
    lc = float(c.log_eval(x))
    return abs(lc) <= LOG_C_MAX and f.growth_rate * abs(x) <= LOG_F_MAX


def net_grids(f: SignalModel, psi: Window, lat: Lattice, c: ComparisonFunction,
              hs: Sequence[float], q: QuadratureSpec = DEFAULT_QUAD, threads: int = 1
              ) -> list[tuple[float, CoefficientGrid]]:
    return [(h, gabor_coefficients(fh, psi, lat, q, threads=threads))
            for h, fh in translation_net(f, c, hs)]


# ------------------------------------------------------------- limits


@dataclass(frozen=True)
class LimitEstimate:
    value: complex
    residual: float
    converged: bool
    reason: str = ""


def default_x_schedule(f: SignalModel, psi: Window, c: ComparisonFunction,
                       cfg: AsymptoticConfig) -> np.ndarray:
    """x_j = 2 * 1.3^j while c(x) and f near x stay in floating-point range."""
    R = integration_radius(f, psi, cfg.quadrature)
    xs = []
    x = 2.0
    while x <= cfg.x_cap:
        if abs(float(c.log_eval(x))) > LOG_C_MAX or f.growth_rate * (x + R) > LOG_F_MAX:
            break
        xs.append(x)
        x *= 1.3
    return np.array(xs)


def _tail_limit(values: np.ndarray, scale: float, cfg: AsymptoticConfig) -> LimitEstimate:
    m = len(values)
    ntail = max(4, int(math.ceil(cfg.tail_fraction * m)))
    if m < ntail:
        return LimitEstimate(complex(values[-1]) if m else 0j, math.inf, False, "schedule too short")
    tail = values[-ntail:]
    half = ntail // 2
    m1, m2 = np.mean(tail[:half]), np.mean(tail[half:])
    est = complex(np.mean(tail))
    resid = float(np.max(np.abs(tail - est)))
    ref = max(abs(m2), cfg.floor * scale)
    ok = abs(m1 - m2) <= cfg.cauchy_tol * ref if ref > 0 else True
    return LimitEstimate(est, resid, bool(ok), "" if ok else "tail means disagree")


@dataclass(frozen=True)
class LimitResult:
    limits: dict
    xs: np.ndarray
    trajectories: np.ndarray  # shape (len(xs), len(ns))
    ns: np.ndarray
    failure: str = ""


def sasymp_coefficient_limits(f: SignalModel, psi: Window, lat: Lattice, c: ComparisonFunction,
                              x_schedule=None, cfg: AsymptoticConfig = AsymptoticConfig()
                              ) -> LimitResult:
    """a_n = lim g_n(x), g_n(x) = e^{2 pi i beta n x} V_psi f(x, beta n) / c(x)."""
    xs = np.asarray(x_schedule if x_schedule is not None else
                    (cfg.x_schedule or default_x_schedule(f, psi, c, cfg)), dtype=float)
    ns = lat.ns
    xis = lat.freq_nodes
    rows = []
    failure = ""
    for x in xs:
        try:
            row = stft_row(f, psi, x, xis, cfg.quadrature, demodulated=True)
        except QuadratureError as exc:
            failure = f"quadrature failed at x={x:g}: {exc}"
            break
        rows.append(row / float(c(x)))
    traj = np.array(rows).reshape(len(rows), len(ns))
    limits = {}
    if failure:
        for j, n in enumerate(ns):
            last = complex(traj[-1, j]) if len(rows) else 0j
            limits[int(n)] = LimitEstimate(last, math.inf, False, failure)
        return LimitResult(limits, xs[:len(rows)], traj, ns, failure)
    scale = float(np.max(np.abs(traj[-max(1, len(rows) // 4):]))) if len(rows) else 0.0
    for j, n in enumerate(ns):
        limits[int(n)] = _tail_limit(traj[:, j], scale, cfg)
    return LimitResult(limits, xs, traj, ns)


# ------------------------------------------------------------- bound check


@dataclass(frozen=True)
class BoundCheck:
    ok: bool
    tau: float
    sup: float
    witness: Optional[tuple[float, int]] = None
    growth: float = 1.0
    reason: str = ""


def tauberian_bound_check(f: SignalModel, psi: Window, lat: Lattice, c: ComparisonFunction,
                          x_range=None, cfg: AsymptoticConfig = AsymptoticConfig()) -> BoundCheck:
    """sup |V_psi f(x, beta n)| / (c(x)(1+|n|)^tau) over probes, stable under range doubling.

    ``x_range`` is the probe grid; the inner half (|x| <= X/2) is compared
    with the full grid.
    """
    if x_range is None:
        pos = default_x_schedule(f, psi, c, cfg)
        x_range = np.concatenate((-pos[::-1], [0.0], pos))
    xs = np.asarray(x_range, dtype=float)
    keep = np.array([_affordable(abs(x), c, f) and abs(float(c.log_eval(x))) <= LOG_C_MAX
                     for x in xs])
    xs = xs[keep]
    ns = lat.ns
    R = np.zeros((xs.size, ns.size))
    for i, x in enumerate(xs):
        row = stft_row(f, psi, x, lat.freq_nodes, cfg.quadrature, demodulated=True)
        R[i] = np.abs(row) / float(c(x))
    per_n = R.max(axis=0)
    if not np.any(per_n > 0):
        return BoundCheck(True, 0.0, 0.0)
    s0 = per_n[ns == 0][0] if np.any(ns == 0) else per_n.max()
    tau = 0.0
    for n, s in zip(ns, per_n):
        if n != 0 and s > 0 and s0 > 0 and s > s0:
            tau = max(tau, math.log(s / s0) / math.log1p(abs(n)))
    W = R / (1.0 + np.abs(ns)[None, :]) ** tau
    X = float(np.max(np.abs(xs)))
    inner = np.abs(xs) <= X / 2
    sup_in = float(W[inner].max()) if inner.any() else 0.0
    sup_all = float(W.max())
    growth = sup_all / sup_in if sup_in > 0 else (math.inf if sup_all > 0 else 1.0)
    if growth <= 1.0 + cfg.bound_stability:
        return BoundCheck(True, tau, sup_all, None, growth)
    i, j = np.unravel_index(int(np.argmax(W)), W.shape)
    return BoundCheck(False, tau, sup_all, (float(xs[i]), int(ns[j])), growth,
                      f"sup grows by a factor {growth:.3g} when the probe range doubles")


# ------------------------------------------------------------- constants


def window_ft_complex(psi: Window, xi, b: float, q: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
    """psi_hat(xi + i b / 2 pi) = int psi(t) e^{bt} e^{-2 pi i xi t} dt."""
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if psi.complex_ft is not None:
        out = np.asarray(psi.complex_ft(xi_arr + 1j * b / (2 * np.pi)), dtype=complex)
    else:
        R = psi.radius(q.tail_tol, rate=abs(b))
        if math.exp(min(abs(b) * R, 700)) * float(psi.abs_envelope(np.array([R]))[0]) > 1e-6 * float(
                psi.abs_envelope(np.array([0.0]))[0]):
            raise CapabilityError(f"psi(t) e^({b:g} t) is not integrable for window {psi.name!r}")
        lo, hi = max(-R, psi.support[0]), min(R, psi.support[1])
        out = fourier_integral(lambda t: psi(t) * np.exp(b * t), lo, hi, xi_arr, q,
                               breaks=psi.breaks(lo, hi))
    return out if np.ndim(xi) else complex(out[0])


@dataclass(frozen=True)
class ConstantsFit:
    C: complex
    b: float
    residual: float
    candidates: tuple[float, ...] = ()


def _model(psi: Window, beta: float, ns: np.ndarray, b: float) -> np.ndarray:
    return np.conj(window_ft_complex(psi, -beta * ns, b))


def solve_asymptote_constants(a_n: dict, psi: Window, beta: float,
                              b_range: tuple[float, float] = (-8.0, 8.0),
                              b_hint: Optional[float] = None, tol: float = 1e-12) -> ConstantsFit:
    """Fit a_n = C(b) conj(psi_hat(-beta n + i b/2pi)) with C(b) fixed by n = 0.

    Several b can fit equally well when the window transform makes the model
    periodic in b; the one closest to ``b_hint`` (else to 0) is returned.
    """
    ns = np.array(sorted(a_n))
    vals = np.array([complex(a_n[n]) for n in ns])
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if scale == 0:
        return ConstantsFit(0j, 0.0, 0.0)
    if 0 not in a_n:
        raise ConfigurationError("a_0 is required to solve for the constants")
    a0 = complex(a_n[0])
    if abs(a0) <= tol * scale:
        raise PreconditionError("a_0 vanishes while other a_n do not: the limits admit no C e^{bx}")
    norm = float(np.sqrt(np.sum(np.abs(vals) ** 2)))

    def resid(b):
        m = _model(psi, beta, ns, b)
        m0 = m[ns == 0][0]
        if m0 == 0 or not np.all(np.isfinite(m)):
            return math.inf
        C = a0 / m0
        return float(np.sqrt(np.sum(np.abs(vals - C * m) ** 2))) / norm

    lo, hi = b_range
    grid = np.linspace(lo, hi, int(round((hi - lo) / 0.01)) + 1)
    r = np.array([resid(b) for b in grid])
    best = float(np.nanmin(r))
    # local minima that are as good as the best one (up to scan resolution)
    cands = []
    for i in range(len(grid)):
        left = r[i - 1] if i > 0 else math.inf
        right = r[i + 1] if i < len(grid) - 1 else math.inf
        if r[i] <= left and r[i] <= right and r[i] <= best + 1e-3 + 0.5 * best:
            cands.append(i)
    refined = []
    for i in cands:
        a, b_ = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        res = optimize.minimize_scalar(resid, bounds=(a, b_), method="bounded",
                                       options={"xatol": 1e-9})
        refined.append((float(res.fun), float(res.x)))
    top = min(v for v, _ in refined)
    tied = [b for v, b in refined if v <= top + max(1e-9, 1e-3 * top) + 1e-12]
    target = 0.0 if b_hint is None else b_hint
    b_best = min(tied, key=lambda b: (abs(b - target), abs(b)))
    m = _model(psi, beta, ns, b_best)
    C = a0 / m[ns == 0][0]
    return ConstantsFit(complex(C), b_best, resid(b_best), tuple(sorted(tied)))


# ------------------------------------------------------------- report


@dataclass(frozen=True)
class AsymptoticReport:
    verdict: str
    C: complex
    b: float
    a_n: dict
    tau: float
    theorem: str
    solve_residual: float = math.nan
    diagnostics: dict = field(default_factory=dict)
    xs: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)
    ns: np.ndarray = field(default_factory=lambda: np.empty(0, int), repr=False)
    trajectories: np.ndarray = field(default_factory=lambda: np.empty((0, 0)), repr=False)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "C": {"re": self.C.real, "im": self.C.imag},
            "b": self.b,
            "tau": self.tau,
            "theorem": self.theorem,
            "a_n": [{"n": int(n), "re": e.value.real, "im": e.value.imag,
                     "residual": e.residual, "converged": e.converged}
                    for n, e in sorted(self.a_n.items())],
            "diagnostics": {"solve_residual": self.solve_residual, **self.diagnostics},
        }

    def trajectory_rows(self):
        for i, x in enumerate(self.xs):
            for j, n in enumerate(self.ns):
                v = self.trajectories[i, j]
                yield (float(x), int(n), v.real, v.imag)


def _phase_drift(traj: np.ndarray, ns: np.ndarray, frac: float) -> float:
    # largest phase change over the tail among non-negligible trajectories
    if traj.size == 0:
        return 0.0
    m = max(4, int(math.ceil(frac * traj.shape[0])))
    tail = traj[-m:]
    mags = np.abs(tail)
    scale = mags.max()
    if scale == 0:
        return 0.0
    drift = 0.0
    for j in range(tail.shape[1]):
        if mags[:, j].min() > 1e-6 * scale:
            ph = np.unwrap(np.angle(tail[:, j]))
            drift = max(drift, float(np.ptp(ph)))
    return drift


def _limit_function_check(net: ConvergenceReport, C: complex, b: float) -> float:
    ref = C * np.exp(b * net.eval_points)
    scale = np.max(np.abs(ref))
    if scale == 0:
        return float(np.max(np.abs(net.limit_function)))
    return float(np.max(np.abs(net.limit_function - ref)) / scale)


def verify_sasymptotics(f: SignalModel, psi: Window, lat: Lattice, c: ComparisonFunction,
                        cfg: AsymptoticConfig = AsymptoticConfig()) -> AsymptoticReport:
    """Frequency-wise limits + growth bound, cross-checked by the translation net."""
    v = validate_lattice(psi, lat)
    if not v.ok:
        raise PreconditionError(v.reason)
    diag: dict = {"lattice": v.status}
    lim = sasymp_coefficient_limits(f, psi, lat, c, cfg=cfg)
    diag["phase_drift"] = _phase_drift(lim.trajectories, lim.ns, cfg.tail_fraction)
    try:
        bound = tauberian_bound_check(f, psi, lat, c, cfg=cfg)
    except QuadratureError as exc:
        bound = None
        diag["bound_check"] = f"quadrature failed: {exc}"
    verdict, reason = "s-asymptotic", ""
    tau = math.nan
    if bound is not None:
        tau = bound.tau
        diag["bound_check"] = {"ok": bound.ok, "growth": bound.growth, "sup": bound.sup,
                               "witness": list(bound.witness) if bound.witness else None}
    C, b, solve_res = 0j, 0.0, math.nan
    if bound is not None and not bound.ok:
        verdict, reason = "rejected", f"growth bound violated at (x, n) = {bound.witness}"
    elif bound is None or lim.failure or not all(e.converged for e in lim.limits.values()):
        bad = [n for n, e in lim.limits.items() if not e.converged]
        verdict = "inconclusive"
        reason = lim.failure or (f"limits did not settle for n in {bad[:6]}" if bad else
                                 "growth bound could not be evaluated")
    else:
        a = {n: e.value for n, e in lim.limits.items()}
        hint = cfg.b_hint if cfg.b_hint is not None else c.limit_rate
        try:
            fit = solve_asymptote_constants(a, psi, lat.beta, cfg.b_range, hint)
        except PreconditionError as exc:
            fit = None
            verdict, reason = "rejected", str(exc)
        if fit is not None:
            C, b, solve_res = fit.C, fit.b, fit.residual
            diag["b_candidates"] = list(fit.candidates)
            if solve_res > cfg.solve_tol:
                verdict, reason = "inconclusive", f"constants residual {solve_res:.3g} above tolerance"
    diag["reason"] = reason
    if cfg.cross_validate:
        net_verdict = _net_route(f, psi, lat, c, cfg)
        diag["net_route"] = net_verdict.to_dict()
        agree = (verdict == "s-asymptotic") == net_verdict.converged
        diag["route_agreement"] = bool(agree)
        if net_verdict.converged and verdict == "s-asymptotic":
            k0 = int(np.argmin(np.abs(lat.ks)))
            row = net_verdict.limit_grid.values[k0]
            ak = np.exp(b * lat.alpha * lat.ks[k0])
            diag["net_vs_limits"] = float(np.max(np.abs(
                row - ak * np.array([lim.limits[int(n)].value for n in lat.ns]))))
            if net_verdict.limit_function is not None:
                diag["limit_function_error"] = _limit_function_check(net_verdict, C, b)
        if not agree:
            diag["reason"] = (reason + "; " if reason else "") + "the two routes disagree"
            verdict = "inconclusive"
    return AsymptoticReport(verdict, complex(C), float(b), lim.limits, tau, "t41", solve_res, diag,
                            lim.xs, lim.ns, lim.trajectories)


def _net_route(f, psi, lat, c, cfg) -> ConvergenceReport:
    hs = net_schedule(psi, lat, c, f, cfg.net_size, cfg.quadrature)
    if len(hs) < 4:
        return _inconclusive_report(lat, "comparison function leaves floating-point range too early")
    try:
        net = net_grids(f, psi, lat, c, hs, cfg.quadrature, cfg.threads)
    except QuadratureError as exc:
        return _inconclusive_report(lat, f"quadrature failed along the net: {exc}")
    gamma = cfg.dual.window if cfg.dual is not None else None
    pts = np.asarray(cfg.limit_points, dtype=float)
    try:
        return detect_net_convergence(net, "exp-pol", cfg.node_tol, gamma, pts)
    except GaborError as exc:
        return _inconclusive_report(lat, str(exc))


def _inconclusive_report(lat: Lattice, reason: str) -> ConvergenceReport:
    return ConvergenceReport(False, "inconclusive", None, np.empty(0), np.empty((0,) + lat.shape),
                             reason=reason)


# ------------------------------------------------------------- monotone case


def monotone_tauberian(f: SignalModel, psi: Window, c: ComparisonFunction,
                       n_set: Sequence[int] = (-2, -1, 0, 1, 2),
                       cfg: AsymptoticConfig = AsymptoticConfig()) -> AsymptoticReport:
    """Non-decreasing f on [0, inf) with psi >= 0: only frequency-wise limits are needed.

    Predicts lim f(x)/(e^{bx} L(e^x)) = a_0 / int psi(t) e^{bt} dt and measures
    the same ratio directly from f for comparison.
    """
    if f.is_point_masses:
        raise PreconditionError("the monotone case needs a pointwise signal")
    R = psi.radius(1e-12)
    tt = np.linspace(-R, R, 4001)
    pv = psi(tt)
    if np.any(np.abs(np.imag(pv)) > 0) or np.min(np.real(pv)) < -1e-14 * np.max(np.abs(pv)):
        raise PreconditionError(f"window {psi.name!r} takes negative values")
    fr = f.restricted(0.0)
    xs = np.asarray(cfg.x_schedule or default_x_schedule(fr, psi, c, cfg), dtype=float)
    ts = np.linspace(0.0, float(xs[-1]) if xs.size else 10.0, 20001)
    fv = np.real(fr(ts))
    if np.any(np.diff(fv) < -1e-12 * max(1.0, np.max(np.abs(fv)))) or np.any(np.imag(fr(ts)) != 0):
        raise PreconditionError("signal is not non-decreasing on [0, inf)")
    if c.limit_rate < 0:
        return AsymptoticReport("rejected", 0j, c.limit_rate, {}, math.nan, "t42",
                                diagnostics={"reason": "a non-decreasing positive signal needs b >= 0"})
    ns = sorted(set(int(n) for n in n_set) | {0})
    lat = Lattice(1.0, 1.0, (0, 0), (min(ns), max(ns)))
    lim = sasymp_coefficient_limits(fr, psi, lat, c, xs, cfg)
    a_n = {n: e for n, e in lim.limits.items() if n in ns}
    denom = window_ft_complex(psi, 0.0, c.limit_rate, cfg.quadrature)
    a0 = a_n[0]
    predicted = a0.value / denom
    direct_vals = np.real(fr(xs)) / c(xs)
    scale = float(np.max(np.abs(direct_vals[-max(1, len(xs) // 4):]))) if xs.size else 0.0
    direct = _tail_limit(direct_vals.astype(complex), scale, cfg)
    gap = abs(predicted - direct.value) / abs(direct.value) if direct.value != 0 else abs(predicted)
    diag = {"predicted_limit": predicted, "direct_ratio": direct.value, "gap": gap,
            "direct_converged": direct.converged, "denominator": denom}
    if lim.failure or not all(e.converged for e in a_n.values()):
        verdict = "inconclusive"
        diag["reason"] = lim.failure or "frequency-wise limits did not settle"
    elif not direct.converged:
        verdict = "inconclusive"
        diag["reason"] = "direct ratio did not settle although the limits did"
    else:
        verdict = "s-asymptotic"
        diag["reason"] = ""
    return AsymptoticReport(verdict, complex(predicted), c.limit_rate, a_n, math.nan, "t42",
                            math.nan, diag, lim.xs, lim.ns, lim.trajectories)


# ------------------------------------------------------------- Wiener kernels


@dataclass(frozen=True)
class WienerCheck:
    holds: bool
    witness: Optional[float]
    min_ratio: float
    extent: float


def _envelope_fit(xi: np.ndarray, m: np.ndarray):
    sel = np.abs(xi) >= (2.0 / 3.0) * np.max(np.abs(xi))
    good = sel & (m > 0)
    if good.sum() < 3:
        return lambda z: np.full_like(np.asarray(z, float), m.max())
    coef = np.polyfit(np.abs(xi[good]), np.log(m[good]), 2)
    return lambda z: np.exp(np.polyval(coef, np.abs(np.asarray(z, float))))


def wiener_condition_check(psi: Window, b: float, xi_grid=None,
                           rel: float = 1e-6) -> WienerCheck:
    """Is psi_hat(xi + i b/2pi) free of zeros, relative to its own decay envelope?"""
    def m(z):
        return np.abs(window_ft_complex(psi, np.asarray(z, float), b))

    if xi_grid is None:
        peak = float(m(np.array([0.0]))[0])
        ext = 2.0
        while ext < 64 and float(np.max(m(np.array([-ext, ext])))) > 1e-12 * max(peak, 1e-300):
            ext *= 1.5
        xi = np.linspace(-ext, ext, int(ext * 400) + 1)
    else:
        xi = np.asarray(xi_grid, dtype=float)
        ext = float(np.max(np.abs(xi)))
    mv = m(xi)
    env = _envelope_fit(xi, mv)
    ratio = mv / env(xi)
    i = int(np.argmin(ratio))
    best_ratio, best_xi = float(ratio[i]), float(xi[i])
    # refine every local minimum: a zero can fall between grid points
    for j in range(1, len(xi) - 1):
        if ratio[j] <= ratio[j - 1] and ratio[j] <= ratio[j + 1] and ratio[j] < 0.5:
            res = optimize.minimize_scalar(lambda z: float(m(np.array([z]))[0] / env(np.array([z]))[0]),
                                           bounds=(xi[j - 1], xi[j + 1]), method="bounded",
                                           options={"xatol": 1e-12})
            if res.fun < best_ratio:
                best_ratio, best_xi = float(res.fun), float(res.x)
    if best_ratio < rel and best_xi < 0:
        # report the positive mirror when it is a zero as well
        z = -best_xi
        r = optimize.minimize_scalar(lambda u: float(m(np.array([u]))[0] / env(np.array([u]))[0]),
                                     bounds=(z - 0.01, z + 0.01), method="bounded",
                                     options={"xatol": 1e-12})
        if r.fun < rel:
            best_ratio, best_xi = float(r.fun), float(r.x)
    if best_ratio >= rel:
        return WienerCheck(True, None, best_ratio, ext)
    return WienerCheck(False, best_xi, best_ratio, ext)


def wiener_tauberian(f: SignalModel, psi: Window, lat: Lattice, c: ComparisonFunction,
                     tau: float, cfg: AsymptoticConfig = AsymptoticConfig()) -> AsymptoticReport:
    """One-frequency detector for Wiener-type windows; c is extended by e^{-tau x} on x <= 0."""
    b = c.limit_rate
    w = wiener_condition_check(psi, b)
    diag: dict = {"wiener": {"holds": w.holds, "witness": w.witness, "min_ratio": w.min_ratio}}
    if not w.holds:
        diag["reason"] = f"window transform vanishes near xi = {w.witness:.6g}"
        return AsymptoticReport("rejected", 0j, b, {}, math.nan, "t43", math.nan, diag)
    ce = replace(c, negative_rate=float(tau))
    lat0 = Lattice(lat.alpha, lat.beta, lat.k_range, (0, 0))
    lim = sasymp_coefficient_limits(f, psi, lat0, ce, cfg=cfg)
    a0 = lim.limits[0]
    try:
        bound = tauberian_bound_check(f, psi, lat, ce, cfg=cfg)
    except QuadratureError as exc:
        bound = None
        diag["bound_check"] = f"quadrature failed: {exc}"
    denom = window_ft_complex(psi, 0.0, b, cfg.quadrature)
    C = a0.value / denom
    diag["denominator"] = denom
    if psi.name == "gaussian" and not psi.params:
        closed = a0.value * math.exp(-b * b / (4 * math.pi))
        diag["gaussian_closed_form"] = closed
        diag["closed_form_gap"] = abs(closed - C)
    verdict, reason = "s-asymptotic", ""
    t_out = math.nan
    if bound is not None:
        t_out = bound.tau
        diag["bound_check"] = {"ok": bound.ok, "growth": bound.growth,
                               "witness": list(bound.witness) if bound.witness else None}
        if not bound.ok:
            verdict, reason = "rejected", f"growth bound violated at (x, n) = {bound.witness}"
    if verdict == "s-asymptotic" and (bound is None or not a0.converged):
        verdict = "inconclusive"
        reason = lim.failure or a0.reason or "growth bound could not be evaluated"
    diag["reason"] = reason
    return AsymptoticReport(verdict, complex(C) if verdict == "s-asymptotic" else complex(C), b,
                            {0: a0}, t_out, "t43", math.nan, diag, lim.xs, lim.ns, lim.trajectories)
