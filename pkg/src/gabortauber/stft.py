"""Short-time Fourier transform, lattice sampling and synthesis."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError, UsageError
from .model import CoefficientGrid, Lattice, SignalModel, Window, require_same_lattice
from .quadrature import QuadratureSpec, fourier_integral

DEFAULT_QUAD = QuadratureSpec()


def integration_radius(f: SignalModel, psi: Window, q: QuadratureSpec) -> float:
    if q.support_cutoff is not None:
        return q.support_cutoff
    return psi.radius(q.tail_tol, rate=f.growth_rate)


def stft_row(f: SignalModel, psi: Window, x: float, xis, q: QuadratureSpec = DEFAULT_QUAD,
             demodulated: bool = False, location=None) -> np.ndarray:
    """V_psi f(x, xi) for a batch of frequencies at one time position.

    With ``demodulated=True`` the factor e^{2 pi i xi x} is removed, i.e. the
    result is int f(x+u) conj(psi(u)) e^{-2 pi i xi u} du.  Computing it this
    way avoids large phases when x is large.
    """
    xis = np.atleast_1d(np.asarray(xis, dtype=float))
    x = float(x)
    if f.is_point_masses:
        loc = np.array([m[0] for m in f.masses])
        w = np.array([m[1] for m in f.masses])
        u = loc - x
        amp = w * np.conj(psi(u))
        out = np.exp(-2j * np.pi * np.outer(xis, u)) @ amp
    elif f.is_zero():
        return np.zeros(xis.size, dtype=complex)
    else:
        R = integration_radius(f, psi, q)
        s_lo, s_hi = f.support
        p_lo, p_hi = psi.support
        lo = max(-R, s_lo - x, p_lo)
        hi = min(R, s_hi - x, p_hi)
        if not hi > lo:
            return np.zeros(xis.size, dtype=complex)
        brk = np.union1d(f.breaks(x + lo, x + hi) - x, psi.breaks(lo, hi))
        out = fourier_integral(lambda u: f(x + u) * np.conj(psi(u)), lo, hi, xis, q,
                               breaks=brk, location=location)
    if demodulated:
        return out
    return out * np.exp(-2j * np.pi * xis * x)


def stft_point(f: SignalModel, psi: Window, x: float, xi: float,
               q: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """V_psi f(x, xi) = int f(t) conj(psi(t - x)) e^{-2 pi i xi t} dt."""
    return complex(stft_row(f, psi, x, [xi], q, location=(x, xi))[0])


def gabor_coefficients(f: SignalModel, psi: Window, lat: Lattice,
                       q: QuadratureSpec = DEFAULT_QUAD, threads: int = 1) -> CoefficientGrid:
    """c_{k,n} = V_psi f(alpha k, beta n) over the lattice section."""
    xis = lat.freq_nodes

    def row(k):
        try:
            return stft_row(f, psi, lat.alpha * k, xis, q)
        except QuadratureError as exc:
            n_bad = None if exc.xi is None else int(round(exc.xi / lat.beta))
            raise QuadratureError(f"at lattice node k={k} (n={n_bad}): {exc}",
                                  estimates=exc.estimates, location=(int(k), n_bad), xi=exc.xi) from exc

    ks = lat.ks
    if threads > 1 and len(ks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, ks))
    else:
        rows = [row(k) for k in ks]
    return CoefficientGrid(lat, np.vstack(rows), signal_id=f.id, window_id=psi.id)


@dataclass(frozen=True)
class TailEstimate:
    """Contribution of the outermost index shell to a synthesis."""

    shell: int
    contribution: float
    relative: float


def _synthesis_matrix(values: np.ndarray, gamma: Window, lat: Lattice, t: np.ndarray) -> np.ndarray:
    # sum_k gamma(t - alpha k) * sum_n c_{k,n} e^{2 pi i beta n t}
    E = np.exp(2j * np.pi * np.outer(lat.freq_nodes, t))
    inner = values @ E
    G = gamma(t[None, :] - lat.time_nodes[:, None])
    return np.sum(G * inner, axis=0)


def _check_synthesizable(grid: CoefficientGrid) -> None:
    from .growth import classify_grid_growth, fittable

    if fittable(grid.lattice) and np.any(grid.values != 0):
        est = classify_grid_growth(grid)
        if est.cls == "unclassified":
            raise UsageError("grid grows faster than exponential-polynomial; refusing to synthesize")


def synthesize(grid: CoefficientGrid, gamma: Window, lat: Lattice | None = None,
               eval_points=None, check_growth: bool = True) -> tuple[np.ndarray, TailEstimate]:
    """D_gamma c(t) = sum_{k,n} c_{k,n} e^{2 pi i beta n t} gamma(t - alpha k).

    Returns the samples and the contribution of the outermost shell
    max(|k|, |n|) = s_max, the truncation heuristic used throughout.
    """
    if lat is None:
        lat = grid.lattice
    elif not lat.same_as(grid.lattice):
        raise UsageError("synthesis lattice differs from the grid's lattice")
    if check_growth:
        _check_synthesizable(grid)
    t = np.atleast_1d(np.asarray(eval_points, dtype=float))
    vals = grid.values
    total = _synthesis_matrix(vals, gamma, lat, t)
    shells = grid.shell_index()
    smax = int(shells.max())
    outer = np.where(shells == smax, vals, 0)
    part = _synthesis_matrix(outer, gamma, lat, t)
    contrib = float(np.max(np.abs(part))) if t.size else 0.0
    scale = float(np.max(np.abs(total))) if t.size else 0.0
    rel = contrib / scale if scale > 0 else (0.0 if contrib == 0 else math.inf)
    return total, TailEstimate(smax, contrib, rel)


def shell_contributions(grid: CoefficientGrid, gamma: Window, eval_points,
                        axis: str = "k") -> dict[int, float]:
    """Sup-norm over ``eval_points`` of the partial synthesis from each |k| (or |n|) shell."""
    lat = grid.lattice
    t = np.atleast_1d(np.asarray(eval_points, dtype=float))
    if axis == "k":
        idx = np.abs(lat.ks)[:, None] * np.ones(lat.shape[1], int)[None, :]
    elif axis == "n":
        idx = np.ones(lat.shape[0], int)[:, None] * np.abs(lat.ns)[None, :]
    else:
        idx = grid.shell_index()
    out = {}
    for s in np.unique(idx):
        part = np.where(idx == s, grid.values, 0)
        out[int(s)] = float(np.max(np.abs(_synthesis_matrix(part, gamma, lat, t))))
    return out


@dataclass(frozen=True)
class PairingResult:
    value: complex
    tail_f: float
    tail_phi: float
    shell_contribution: complex


def dual_pairing(grid_f: CoefficientGrid, grid_phi: CoefficientGrid) -> PairingResult:
    """Truncated sum_{k,n} c^psi_{k,n}(f) c^{conj gamma}_{k,-n}(phi).

    ``grid_phi`` must be the coefficient grid of phi for the window conj(gamma)
    on the same lattice; frequency indices are reflected here.  Only nodes whose
    reflection lies inside the range contribute.  The tails are the largest
    coefficient magnitudes on each grid's outermost shell.
    """
    lat = require_same_lattice([grid_f, grid_phi])
    ns = lat.ns
    keep = np.isin(-ns, ns)
    j = np.searchsorted(ns, -ns[keep])
    a = grid_f.values[:, keep]
    b = grid_phi.values[:, j]
    prod = a * b
    value = complex(np.sum(prod))
    shells = np.maximum(np.abs(lat.ks)[:, None], np.abs(ns[keep])[None, :])
    smax = shells.max()
    shell_part = complex(np.sum(prod[shells == smax]))

    def tail(g):
        s = g.shell_index()
        return float(np.max(np.abs(g.values[s == s.max()])))

    return PairingResult(value, tail(grid_f), tail(grid_phi), shell_part)
