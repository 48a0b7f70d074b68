"""Built-in signals and windows, and construction from JSON-style specs."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Any

import numpy as np
from numpy.polynomial import hermite
from scipy.interpolate import CubicSpline

from .errors import CapabilityError, ConfigurationError
from .model import SignalModel, Window, modulate, translate

# ---------------------------------------------------------------- signals


def gaussian(amplitude: float = 1.0, center: float = 0.0, width: float = 1.0,
             freq: float = 0.0) -> SignalModel:
    if width <= 0:
        raise ConfigurationError("gaussian width must be positive")

    def ev(t):
        out = amplitude * np.exp(-np.pi * ((t - center) / width) ** 2)
        if freq:
            out = out * np.exp(2j * np.pi * freq * t)
        return out

    return SignalModel("catalog", "gaussian", ev, growth="exp-type",
                       params={"amplitude": amplitude, "center": center, "width": width, "freq": freq})


def gaussian_mixture(components: list[dict]) -> SignalModel:
    if not components:
        raise ConfigurationError("gaussian_mixture needs at least one component")
    parts = [gaussian(**c) for c in components]

    def ev(t):
        return sum(p(t) for p in parts)

    return SignalModel("catalog", "gaussian_mixture", ev, growth="exp-type",
                       params={"components": len(parts)})


def _step_breaks(a, b):
    return np.array([0.0]) if a < 0 < b else np.empty(0)


def heaviside() -> SignalModel:
    return SignalModel("catalog", "heaviside", lambda t: np.where(t >= 0, 1.0, 0.0),
                       growth="polynomial-type", breaks=_step_breaks, monotone=True)


def exp_step(b: float = 1.0) -> SignalModel:
    """e^{bt} H(t)."""
    def ev(t):
        return np.where(t >= 0, np.exp(b * np.minimum(t, 700.0 / max(abs(b), 1e-300))), 0.0)

    return SignalModel("catalog", "exp_step", ev, growth="exp-type", growth_rate=abs(b),
                       breaks=_step_breaks, params={"b": b}, monotone=b >= 0)


def exp_full(b: float = 1.0) -> SignalModel:
    """e^{bt} on the whole line."""
    return SignalModel("catalog", "exp", lambda t: np.exp(b * t), growth="exp-type",
                       growth_rate=abs(b), params={"b": b}, monotone=b >= 0)


def staircase() -> SignalModel:
    """floor(t) H(t)."""
    def breaks(a, b):
        lo, hi = max(math.ceil(a), 0), math.floor(b)
        pts = np.arange(lo, hi + 1, dtype=float)
        return pts[(pts > a) & (pts < b)]

    return SignalModel("catalog", "staircase", lambda t: np.where(t >= 0, np.floor(t), 0.0),
                       growth="polynomial-type", growth_rate=0.05, breaks=breaks, monotone=True)


def poly_log(nu: float = 1.0) -> SignalModel:
    """t^nu log(t) H(t - 1)."""
    def ev(t):
        s = np.maximum(t, 1.0)
        return np.where(t >= 1, s**nu * np.log(s), 0.0)

    def breaks(a, b):
        return np.array([1.0]) if a < 1 < b else np.empty(0)

    return SignalModel("catalog", "poly_log", ev, growth="polynomial-type", growth_rate=0.05,
                       breaks=breaks, params={"nu": nu}, monotone=nu >= 0)


def constant(value: float = 1.0) -> SignalModel:
    return SignalModel("catalog", "constant", lambda t: np.full_like(np.asarray(t, float), value),
                       growth="polynomial-type", params={"value": value, "_zero": value == 0},
                       monotone=True)


def sin_exp() -> SignalModel:
    """sin(e^t): bounded but with unboundedly fast oscillation."""
    return SignalModel("catalog", "sin_exp", lambda t: np.sin(np.exp(np.minimum(t, 700.0))),
                       growth="polynomial-type")


def zero() -> SignalModel:
    return SignalModel("catalog", "zero", lambda t: np.zeros_like(np.asarray(t, float)),
                       growth="compact-support", params={"_zero": True}, monotone=True)


def point_masses(masses) -> SignalModel:
    """Finite combination sum_j w_j delta_{x_j}."""
    return SignalModel("point_masses", "dirac", masses=tuple(masses), growth="compact-support")


def sampled_signal(t, values, extension: str = "zero", name: str = "sampled") -> SignalModel:
    """Piecewise-linear interpolation of a table; nodes are reported as breakpoints."""
    t = np.asarray(t, dtype=float)
    v = np.asarray(values)
    if t.ndim != 1 or t.size < 2 or t.shape != v.shape:
        raise ConfigurationError("sampled table needs matching 1-d abscissae and values (>= 2 rows)")
    if not np.all(np.diff(t) > 0):
        raise ConfigurationError("sampled table abscissae must be strictly increasing")
    if extension not in ("zero", "hold"):
        raise ConfigurationError(f"unknown extension rule {extension!r}")
    vc = v.astype(complex)
    is_real = bool(np.all(vc.imag == 0))

    def ev(x):
        x = np.asarray(x, dtype=float)
        re = np.interp(x, t, vc.real)
        out = re if is_real else re + 1j * np.interp(x, t, vc.imag)
        if extension == "zero":
            out = np.where((x < t[0]) | (x > t[-1]), 0.0, out)
        return out

    def breaks(a, b):
        pts = t[(t > a) & (t < b)]
        return pts

    growth = "compact-support" if extension == "zero" else "polynomial-type"
    return SignalModel("sampled", name, ev, growth=growth, breaks=breaks,
                       params={"nodes": int(t.size), "extension": extension,
                               "_zero": bool(np.all(vc == 0))})


def read_table(path: str | Path, ncols: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Read a CSV with a header line and columns t, value[, imag]."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"table file not found: {path}")
    ts, vs = [], []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            next(reader)
        except StopIteration:
            raise ConfigurationError(f"{path}: empty file") from None
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) not in (2, 3):
                raise ConfigurationError(f"{path}:{lineno}: expected 2 or 3 columns, got {len(row)}")
            try:
                vals = [float(c) for c in row]
            except ValueError:
                raise ConfigurationError(f"{path}:{lineno}: non-numeric entry") from None
            ts.append(vals[0])
            vs.append(vals[1] + (1j * vals[2] if len(vals) == 3 else 0))
    return np.asarray(ts), np.asarray(vs)


SIGNALS = {
    "gaussian": gaussian,
    "gaussian_mixture": gaussian_mixture,
    "heaviside": heaviside,
    "exp_step": exp_step,
    "exp": exp_full,
    "staircase": staircase,
    "poly_log": poly_log,
    "constant": constant,
    "sin_exp": sin_exp,
    "zero": zero,
}


def signal_from_spec(spec: dict, base_dir: Path | None = None) -> SignalModel:
    """Build a signal from a config block.

    Catalog entries take their parameters as sibling keys, e.g.
    ``{"kind": "catalog", "name": "exp_step", "b": 1.0}``.  Every kind accepts
    the optional combinators ``scale``, ``shift`` and ``modulate``.
    """
    spec = dict(spec)
    kind = spec.pop("kind", "catalog")
    comb = {k: spec.pop(k) for k in ("scale", "shift", "modulate") if k in spec}
    if kind == "catalog":
        name = spec.pop("name", None)
        if name not in SIGNALS:
            raise ConfigurationError(f"unknown catalog signal {name!r}")
        try:
            sig = SIGNALS[name](**spec)
        except TypeError as exc:
            raise ConfigurationError(f"bad parameters for signal {name!r}: {exc}") from None
    elif kind == "sampled":
        path = Path(spec.pop("path"))
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        ext = spec.pop("extension", "zero")
        if spec:
            raise ConfigurationError(f"unknown sampled-signal keys: {sorted(spec)}")
        t, v = read_table(path)
        sig = sampled_signal(t, v, ext, name=path.stem)
    elif kind == "point_masses":
        raw = spec.pop("masses", None)
        if spec:
            raise ConfigurationError(f"unknown point-mass keys: {sorted(spec)}")
        if not raw:
            raise ConfigurationError("point_masses needs a non-empty 'masses' list")
        masses = []
        for m in raw:
            if len(m) == 2:
                masses.append((m[0], m[1]))
            elif len(m) == 3:
                masses.append((m[0], complex(m[1], m[2])))
            else:
                raise ConfigurationError("each mass is [location, weight] or [location, re, im]")
        sig = point_masses(masses)
    else:
        raise ConfigurationError(f"unknown signal kind {kind!r}")
    if "scale" in comb:
        s = comb["scale"]
        sig = sig.scaled(complex(*s) if isinstance(s, (list, tuple)) else s)
    if "shift" in comb:
        sig = translate(sig, comb["shift"])
    if "modulate" in comb:
        sig = modulate(sig, comb["modulate"])
    return sig


# ---------------------------------------------------------------- windows


def gaussian_window(width: float = 1.0) -> Window:
    """psi(t) = exp(-pi t^2 / w^2); transform w exp(-pi w^2 z^2)."""
    if width <= 0:
        raise CapabilityError("gaussian window width must be positive")
    w = float(width)
    c = math.sqrt(math.pi) / w

    def deriv(j):
        coef = np.zeros(j + 1)
        coef[j] = 1.0

        def d(t):
            u = c * np.asarray(t, dtype=float)
            return (-c) ** j * hermite.hermval(u, coef) * np.exp(-u * u)
        return d

    return Window(
        name="gaussian",
        evaluator=lambda t: np.exp(-np.pi * (np.asarray(t, float) / w) ** 2),
        derivatives=tuple(deriv(j) for j in range(1, 5)),
        decay_class="K1-exponential",
        complex_ft=lambda z: w * np.exp(-np.pi * w**2 * np.asarray(z, complex) ** 2),
        envelope=lambda t: np.exp(-np.pi * (np.asarray(t, float) / w) ** 2),
        params={} if w == 1.0 else {"width": w},
    )


def two_gaussian_window() -> Window:
    """exp(-pi t^2) - exp(-2 pi t^2)/2; its real transform has zeros."""
    g1, g2 = gaussian_window(1.0), gaussian_window(1 / math.sqrt(2))
    return Window(
        name="two_gaussian",
        evaluator=lambda t: g1(t) - 0.5 * g2(t),
        derivatives=tuple((lambda t, j=j: g1.derivative(t, j) - 0.5 * g2.derivative(t, j))
                          for j in range(1, 5)),
        decay_class="K1-exponential",
        complex_ft=lambda z: g1.complex_ft(z) - 0.5 * g2.complex_ft(z),
        envelope=g1.envelope,
    )


def cauchy_window() -> Window:
    """1/(1+t^2): smooth but only polynomially decaying."""
    def d1(t):
        t = np.asarray(t, float)
        return -2 * t / (1 + t * t) ** 2

    def d2(t):
        t = np.asarray(t, float)
        return (6 * t * t - 2) / (1 + t * t) ** 3

    def ft(z):
        # pi e^{-2 pi |xi|}; no continuation off the real axis exists
        z = np.asarray(z, dtype=complex)
        if np.any(z.imag != 0):
            raise CapabilityError("the Cauchy window has no transform off the real axis")
        return np.pi * np.exp(-2 * np.pi * np.abs(z.real))

    return Window(
        name="cauchy",
        evaluator=lambda t: 1.0 / (1.0 + np.asarray(t, float) ** 2),
        derivatives=(d1, d2),
        decay_class="S-polynomial",
        complex_ft=ft,
        envelope=lambda t: 1.0 / (1.0 + np.asarray(t, float) ** 2),
    )


def sampled_window(t, values, name: str = "sampled") -> Window:
    """Cubic-spline window from a table, zero outside the tabulated range."""
    t = np.asarray(t, dtype=float)
    v = np.asarray(values).astype(complex)
    if t.ndim != 1 or t.size < 4 or t.shape != v.shape:
        raise ConfigurationError("sampled window needs matching 1-d abscissae and values (>= 4 rows)")
    if not np.all(np.diff(t) > 0):
        raise ConfigurationError("sampled window abscissae must be strictly increasing")
    is_real = bool(np.all(v.imag == 0))
    sr = CubicSpline(t, v.real)
    si = None if is_real else CubicSpline(t, v.imag)
    lo, hi = float(t[0]), float(t[-1])

    def ev(x):
        x = np.asarray(x, dtype=float)
        out = sr(x) if si is None else sr(x) + 1j * si(x)
        return np.where((x < lo) | (x > hi), 0.0, out)

    return Window(name=name, evaluator=ev, decay_class="numeric-only", support=(lo, hi),
                  is_real=is_real, params={"nodes": int(t.size)}, knots=t)


WINDOWS = {
    "gaussian": gaussian_window,
    "two_gaussian": two_gaussian_window,
    "cauchy": cauchy_window,
}


def window_from_spec(spec: dict, base_dir: Path | None = None) -> Window:
    spec = dict(spec)
    name = spec.pop("name", None)
    scale = spec.pop("scale", None)
    if name == "sampled":
        path = Path(spec.pop("path"))
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        if spec:
            raise ConfigurationError(f"unknown sampled-window keys: {sorted(spec)}")
        t, v = read_table(path)
        win = sampled_window(t, v, name=path.stem)
    elif name in WINDOWS:
        try:
            win = WINDOWS[name](**spec)
        except TypeError as exc:
            raise ConfigurationError(f"bad parameters for window {name!r}: {exc}") from None
    else:
        raise ConfigurationError(f"unknown window {name!r}")
    if scale is not None:
        win = win.scaled(float(scale))
    return win


def describe(obj: Any) -> str:
    return getattr(obj, "id", repr(obj))
