"""Domain types shared by every other module.

Signals and windows are thin immutable wrappers around vectorised callables.
Everything here is pure: combinators such as :func:`translate` return new
objects and never touch the originals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import CapabilityError, ConfigurationError, UsageError

ArrayFn = Callable[[np.ndarray], np.ndarray]

SIGNAL_KINDS = ("catalog", "sampled", "point_masses")
GROWTH_HINTS = ("exp-type", "polynomial-type", "compact-support", "unknown")
DECAY_CLASSES = ("K1-exponential", "S-polynomial", "numeric-only")

# orders of derivatives the catalog guarantees
P_MAX = 4
FD_STEP = 1e-3


def _no_breaks(a: float, b: float) -> np.ndarray:
    return np.empty(0)


def _as_array(t) -> np.ndarray:
    return np.asarray(t, dtype=float)


def central_difference(fn: ArrayFn, t: np.ndarray, order: int, step: float = FD_STEP) -> np.ndarray:
    """Central finite difference of ``fn`` of the given order."""
    t = _as_array(t)
    if order == 0:
        return fn(t)
    acc = 0.0
    for i in range(order + 1):
        coef = (-1) ** i * math.comb(order, i)
        acc = acc + coef * fn(t + (order / 2 - i) * step)
    return acc / step**order


@dataclass(frozen=True)
class Lattice:
    """Finite section of the time-frequency lattice alpha*Z x beta*Z."""

    alpha: float
    beta: float
    k_range: tuple[int, int]
    n_range: tuple[int, int]

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ConfigurationError(f"lattice steps must be positive, got alpha={self.alpha}, beta={self.beta}")
        for name in ("k_range", "n_range"):
            lo, hi = getattr(self, name)
            if int(lo) != lo or int(hi) != hi:
                raise ConfigurationError(f"lattice {name} must hold integers")
            if lo > hi:
                raise ConfigurationError(f"lattice {name} is empty: {lo} > {hi}")
            object.__setattr__(self, name, (int(lo), int(hi)))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def density(self) -> float:
        return self.alpha * self.beta

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_range[0], self.k_range[1] + 1)

    @property
    def ns(self) -> np.ndarray:
        return np.arange(self.n_range[0], self.n_range[1] + 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.k_range[1] - self.k_range[0] + 1, self.n_range[1] - self.n_range[0] + 1)

    @property
    def time_nodes(self) -> np.ndarray:
        return self.alpha * self.ks

    @property
    def freq_nodes(self) -> np.ndarray:
        return self.beta * self.ns

    def time_coverage(self) -> tuple[float, float]:
        return (self.alpha * self.k_range[0], self.alpha * self.k_range[1])

    def freq_coverage(self) -> tuple[float, float]:
        return (self.beta * self.n_range[0], self.beta * self.n_range[1])

    def scaled_ranges(self, factor: float) -> "Lattice":
        """Same steps, index ranges multiplied by ``factor`` (rounded outward)."""
        def grow(r):
            return (int(math.floor(r[0] * factor)), int(math.ceil(r[1] * factor)))
        return replace(self, k_range=grow(self.k_range), n_range=grow(self.n_range))

    def same_as(self, other: "Lattice") -> bool:
        return (
            math.isclose(self.alpha, other.alpha, rel_tol=1e-12)
            and math.isclose(self.beta, other.beta, rel_tol=1e-12)
            and self.k_range == other.k_range
            and self.n_range == other.n_range
        )

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta,
                "k_range": list(self.k_range), "n_range": list(self.n_range)}


@dataclass(frozen=True)
class SignalModel:
    """A pointwise-evaluable signal or a finite combination of point masses.

    ``growth_rate`` is an exponential rate r with |f(t+u)| <~ e^{r|u|}|f(t)|
    locally; quadrature uses it to size the integration window.  ``breaks``
    returns the discontinuities of f inside an interval so that panels can be
    aligned with them.
    """

    kind: str
    name: str
    evaluator: Optional[ArrayFn] = None
    masses: tuple[tuple[float, complex], ...] = ()
    growth: str = "unknown"
    growth_rate: float = 0.0
    support: tuple[float, float] = (-math.inf, math.inf)
    breaks: Callable[[float, float], np.ndarray] = _no_breaks
    params: dict = field(default_factory=dict, compare=False)
    monotone: bool = False

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise ConfigurationError(f"unknown signal kind {self.kind!r}")
        if self.growth not in GROWTH_HINTS:
            raise ConfigurationError(f"unknown growth hint {self.growth!r}")
        if self.kind == "point_masses":
            if not self.masses:
                raise ConfigurationError("a point-mass combination needs at least one mass")
            if self.evaluator is not None:
                raise ConfigurationError("point-mass combinations carry no evaluator")
            object.__setattr__(
                self, "masses", tuple((float(x), complex(w)) for x, w in self.masses)
            )
        elif self.evaluator is None:
            raise ConfigurationError(f"signal {self.name!r} needs an evaluator")

    @property
    def is_point_masses(self) -> bool:
        return self.kind == "point_masses"

    @property
    def id(self) -> str:
        return _ident(self.name, self.params)

    def __call__(self, t) -> np.ndarray:
        if self.evaluator is None:
            raise CapabilityError(f"{self.name} is a point-mass combination and has no pointwise values")
        t = _as_array(t)
        lo, hi = self.support
        out = np.asarray(self.evaluator(t))
        if math.isfinite(lo) or math.isfinite(hi):
            out = np.where((t >= lo) & (t <= hi), out, 0.0)
        return out

    def derivative(self, t, order: int) -> np.ndarray:
        return central_difference(self, t, order)

    def is_zero(self) -> bool:
        if self.is_point_masses:
            return all(w == 0 for _, w in self.masses)
        return bool(self.params.get("_zero", False))

    def scaled(self, s: complex) -> "SignalModel":
        """Multiply by a constant."""
        if self.is_point_masses:
            return replace(self, masses=tuple((x, w * s) for x, w in self.masses),
                           params={**self.params, "scale": _fmt(s)})
        ev = self.evaluator
        zero = self.is_zero() or s == 0
        params = {**self.params, "scale": _fmt(s)}
        if zero:
            params["_zero"] = True
        return replace(self, evaluator=lambda t: s * ev(t), params=params)

    def restricted(self, lo: float = -math.inf, hi: float = math.inf) -> "SignalModel":
        """Cut the signal to [lo, hi] (zero outside)."""
        if self.is_point_masses:
            kept = tuple((x, w) for x, w in self.masses if lo <= x <= hi)
            if not kept:
                kept = ((lo if math.isfinite(lo) else 0.0, 0.0),)
            return replace(self, masses=kept)
        s_lo, s_hi = self.support
        new_lo, new_hi = max(lo, s_lo), min(hi, s_hi)
        old = self.breaks

        def breaks(a, b, old=old, edges=(new_lo, new_hi)):
            pts = [p for p in edges if math.isfinite(p) and a < p < b]
            return np.union1d(old(a, b), np.asarray(pts, dtype=float))

        return replace(self, support=(new_lo, new_hi), breaks=breaks,
                       params={**self.params, "restrict": f"[{lo},{hi}]"})


def _ident(name: str, params: dict) -> str:
    keys = sorted(k for k in params if not k.startswith("_"))
    if not keys:
        return name
    return name + "(" + ",".join(f"{k}={params[k]}" for k in keys) + ")"


def _fmt(x) -> str:
    x = complex(x)
    return f"{x.real:g}" if x.imag == 0 else f"{x.real:g}{x.imag:+g}j"


def translate(signal: SignalModel, x: float) -> SignalModel:
    """Translation (T_x f)(t) = f(t - x)."""
    x = float(x)
    if x == 0:
        return signal
    params = {**signal.params, "shift": signal.params.get("shift", 0.0) + x}
    if signal.is_point_masses:
        return replace(signal, masses=tuple((t + x, w) for t, w in signal.masses), params=params)
    ev, old = signal.evaluator, signal.breaks
    lo, hi = signal.support
    return replace(
        signal,
        evaluator=lambda t: ev(t - x),
        support=(lo + x, hi + x),
        breaks=lambda a, b: old(a - x, b - x) + x,
        params=params,
    )


def modulate(signal: SignalModel, xi: float) -> SignalModel:
    """Modulation (M_xi f)(t) = exp(2 pi i xi t) f(t)."""
    xi = float(xi)
    if xi == 0:
        return signal
    params = {**signal.params, "mod": signal.params.get("mod", 0.0) + xi}
    if signal.is_point_masses:
        return replace(
            signal,
            masses=tuple((t, w * np.exp(2j * np.pi * xi * t)) for t, w in signal.masses),
            params=params,
        )
    ev = signal.evaluator
    return replace(signal, evaluator=lambda t: np.exp(2j * np.pi * xi * t) * ev(t), params=params)


@dataclass(frozen=True)
class Window:
    """A window function with derivatives, a decay envelope and maybe a transform.

    ``envelope(t)`` must bound |psi(t)| from above and be non-increasing in
    |t|; it drives the quadrature cut-off.  ``complex_ft(z)`` is the analytic
    continuation of the Fourier transform int psi(t) exp(-2 pi i z t) dt.
    """

    name: str
    evaluator: ArrayFn
    derivatives: tuple[ArrayFn, ...] = ()
    decay_class: str = "numeric-only"
    complex_ft: Optional[Callable[[np.ndarray], np.ndarray]] = None
    envelope: Optional[ArrayFn] = None
    support: tuple[float, float] = (-math.inf, math.inf)
    params: dict = field(default_factory=dict, compare=False)
    is_real: bool = True
    p_max: int = P_MAX
    knots: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.decay_class not in DECAY_CLASSES:
            raise ConfigurationError(f"unknown decay class {self.decay_class!r}")
        lo, hi = self.support
        probe_lo = max(lo, -8.0)
        probe_hi = min(hi, 8.0)
        probe = np.linspace(probe_lo, probe_hi, 4001)
        if not np.any(np.abs(self.evaluator(probe)) > 0):
            raise CapabilityError(f"window {self.name!r} vanishes identically")

    @property
    def id(self) -> str:
        return _ident(self.name, self.params)

    def __call__(self, t) -> np.ndarray:
        t = _as_array(t)
        lo, hi = self.support
        out = self.evaluator(t)
        if math.isfinite(lo) or math.isfinite(hi):
            out = np.where((t >= lo) & (t <= hi), out, 0.0)
        return out

    def derivative(self, t, order: int) -> np.ndarray:
        if order == 0:
            return self(t)
        if order > self.p_max:
            raise CapabilityError(f"window {self.name!r} provides derivatives up to order {self.p_max}")
        if order <= len(self.derivatives):
            return self.derivatives[order - 1](_as_array(t))
        return central_difference(self, t, order)

    def abs_envelope(self, t) -> np.ndarray:
        t = np.abs(_as_array(t))
        if self.envelope is not None:
            return self.envelope(t)
        return _numeric_envelope(self, t)

    def radius(self, tol: float, rate: float = 0.0, cap: float = 200.0) -> float:
        """Smallest R with exp(rate*R) * envelope(R) below tol relative to the peak.

        A factor 10 of head-room is built in so the neglected tail integral
        stays below ``tol`` as well.
        """
        peak = float(self.abs_envelope(np.array([0.0]))[0])
        target = tol * peak / 10.0
        lo, hi = self.support
        finite_edge = max(abs(lo), abs(hi)) if (math.isfinite(lo) and math.isfinite(hi)) else math.inf
        r = 0.25
        while r < cap:
            if r >= finite_edge:
                return finite_edge
            val = math.exp(min(rate * r, 700.0)) * float(self.abs_envelope(np.array([r]))[0])
            if val <= target:
                return r
            r *= 1.1
        return min(cap, finite_edge)

    def breaks(self, a: float, b: float) -> np.ndarray:
        """Points in (a, b) where the window is not smooth (support edges, spline knots)."""
        pts = [p for p in self.support if math.isfinite(p)]
        if self.knots is not None:
            pts = np.concatenate([np.asarray(pts, float), self.knots])
        pts = np.asarray(pts, dtype=float)
        return np.unique(pts[(pts > a) & (pts < b)])

    def conj(self) -> "Window":
        """The complex-conjugate window t -> conj(psi(t))."""
        if self.is_real:
            return self
        ev = self.evaluator
        ders = tuple((lambda t, d=d: np.conj(d(t))) for d in self.derivatives)
        ft = None
        if self.complex_ft is not None:
            f = self.complex_ft
            ft = lambda z: np.conj(f(-np.conj(z)))  # noqa: E731
        return replace(self, name=f"conj({self.name})", evaluator=lambda t: np.conj(ev(t)),
                       derivatives=ders, complex_ft=ft)

    def scaled(self, s: float) -> "Window":
        if s == 0:
            raise CapabilityError(f"scaling window {self.name!r} by zero leaves no window")
        ev, env, ft = self.evaluator, self.envelope, self.complex_ft
        return replace(
            self,
            evaluator=lambda t: s * ev(t),
            derivatives=tuple((lambda t, d=d: s * d(t)) for d in self.derivatives),
            envelope=None if env is None else (lambda t: abs(s) * env(t)),
            complex_ft=None if ft is None else (lambda z: s * ft(z)),
            params={**self.params, "scale": s},
        )


def _numeric_envelope(window: Window, t: np.ndarray) -> np.ndarray:
    # tail maximum of |psi| sampled outward from |t|; used for table windows
    lo, hi = window.support
    edge = max(abs(lo), abs(hi)) if (math.isfinite(lo) and math.isfinite(hi)) else 60.0
    grid = np.linspace(0.0, edge, 6001)
    vals = np.maximum(np.abs(window(grid)), np.abs(window(-grid)))
    tail = np.maximum.accumulate(vals[::-1])[::-1]
    out = np.interp(np.minimum(t, edge), grid, tail)
    return np.where(t > edge, 0.0 if math.isfinite(lo) else tail[-1], out)


@dataclass(frozen=True)
class CoefficientGrid:
    """Complex coefficients indexed by lattice nodes (k, n).

    ``values[i, j]`` belongs to k = k_min + i, n = n_min + j.
    """

    lattice: Lattice
    values: np.ndarray
    signal_id: str = ""
    window_id: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != self.lattice.shape:
            raise UsageError(f"grid shape {vals.shape} does not match lattice {self.lattice.shape}")
        if not np.all(np.isfinite(vals)):
            raise UsageError("coefficient grid contains non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def at(self, k: int, n: int) -> complex:
        return complex(self.values[k - self.lattice.k_range[0], n - self.lattice.n_range[0]])

    def scaled(self, s: complex) -> "CoefficientGrid":
        return replace(self, values=self.values * s)

    def with_values(self, values: np.ndarray, **kw) -> "CoefficientGrid":
        return replace(self, values=values, **kw)

    def shell_index(self) -> np.ndarray:
        """max(|k|, |n|) for every node."""
        K, N = np.meshgrid(np.abs(self.lattice.ks), np.abs(self.lattice.ns), indexing="ij")
        return np.maximum(K, N)


def require_same_lattice(grids: Sequence[CoefficientGrid]) -> Lattice | None:
    if not grids:
        return None
    lat = grids[0].lattice
    for g in grids[1:]:
        if not g.lattice.same_as(lat):
            raise UsageError("coefficient grids live on different lattices")
    return lat
