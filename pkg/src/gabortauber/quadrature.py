"""Composite Gauss-Legendre quadrature for windowed Fourier integrals.

All integrals handled here have the form

    I(xi) = int_lo^hi g(u) exp(-2 pi i xi u) du

for a batch of frequencies xi, with g smooth between known breakpoints.
Panels are halved until two successive estimates agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, QuadratureError


@dataclass(frozen=True)
class QuadratureSpec:
    panel_width: float = 0.5
    support_cutoff: Optional[float] = None
    tail_tol: float = 1e-10
    order: int = 10
    max_refinements: int = 7
    max_nodes: int = 2_000_000

    def __post_init__(self):
        if not self.panel_width > 0:
            raise ConfigurationError("quadrature panel_width must be positive")
        if not self.tail_tol > 0:
            raise ConfigurationError("quadrature tail_tol must be positive")
        if self.support_cutoff is not None and not self.support_cutoff > 0:
            raise ConfigurationError("quadrature support_cutoff must be positive")
        if self.order < 2:
            raise ConfigurationError("quadrature order must be at least 2")
        if self.max_refinements < 1:
            raise ConfigurationError("quadrature max_refinements must be at least 1")

    def to_dict(self) -> dict:
        return {"panel_width": self.panel_width, "support_cutoff": self.support_cutoff,
                "tail_tol": self.tail_tol, "order": self.order,
                "max_refinements": self.max_refinements, "max_nodes": self.max_nodes}


@lru_cache(maxsize=16)
def _gl(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def panel_nodes(lo: float, hi: float, breaks: np.ndarray, width: float, order: int
                ) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Gauss-Legendre on [lo, hi].

    Every breakpoint is a panel edge; segments between breakpoints are split
    into equal panels no wider than ``width``.
    """
    edges = np.concatenate(([lo], np.sort(breaks[(breaks > lo) & (breaks < hi)]), [hi]))
    x0, w0 = _gl(order)
    pts, wts = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        m = max(1, int(math.ceil((b - a) / width - 1e-12)))
        e = np.linspace(a, b, m + 1)
        half = 0.5 * np.diff(e)
        mid = 0.5 * (e[:-1] + e[1:])
        pts.append((mid[:, None] + half[:, None] * x0[None, :]).ravel())
        wts.append((half[:, None] * w0[None, :]).ravel())
    return np.concatenate(pts), np.concatenate(wts)


def _apply(gvals: np.ndarray, u: np.ndarray, xis: np.ndarray) -> np.ndarray:
    out = np.empty(xis.size, dtype=complex)
    d = np.diff(xis)
    if xis.size > 4 and np.allclose(d, d[0], rtol=1e-12, atol=0) and d[0] != 0:
        # evenly spaced frequencies: advance the phase by repeated multiplication,
        # re-anchoring with an exact exponential every 16 rows
        step = np.exp(-2j * np.pi * d[0] * u)
        for j in range(xis.size):
            if j % 16 == 0:
                row = np.exp(-2j * np.pi * xis[j] * u)
            else:
                row = row * step
            out[j] = row @ gvals
        return out
    chunk = max(1, 2_000_000 // max(u.size, 1))
    for s in range(0, xis.size, chunk):
        ph = np.exp(-2j * np.pi * np.outer(xis[s:s + chunk], u))
        out[s:s + chunk] = ph @ gvals
    return out


def fourier_integral(
    g: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    xis: np.ndarray,
    q: QuadratureSpec,
    breaks: np.ndarray | None = None,
    location=None,
) -> np.ndarray:
    """Integrate g(u) exp(-2 pi i xi u) over [lo, hi] for every xi in ``xis``.

    Raises :class:`QuadratureError` with the last two estimates if successive
    halvings never agree to ``tail_tol`` relative to int |g|.
    """
    xis = np.atleast_1d(np.asarray(xis, dtype=float))
    if not hi > lo:
        return np.zeros(xis.size, dtype=complex)
    if breaks is None:
        breaks = np.empty(0)
    width = min(q.panel_width, 1.0 / (4.0 * (1.0 + float(np.max(np.abs(xis))))), (hi - lo))
    prev = None
    diff = math.inf
    for _ in range(q.max_refinements + 1):
        if (hi - lo) / width * q.order > q.max_nodes:
            break
        u, w = panel_nodes(lo, hi, breaks, width, q.order)
        gv = np.asarray(g(u), dtype=complex) * w
        if not np.all(np.isfinite(gv)):
            raise QuadratureError("integrand is not finite on the quadrature nodes", location=location)
        cur = _apply(gv, u, xis)
        scale = float(np.sum(np.abs(gv)))
        if prev is not None:
            delta = np.abs(cur - prev)
            diff = float(np.max(delta))
            if diff <= q.tail_tol * max(scale, 1e-300):
                return cur
            worst = int(np.argmax(delta))
            last_two = (complex(prev[worst]), complex(cur[worst]))
            worst_xi = float(xis[worst])
        prev = cur
        width *= 0.5
    if prev is None or diff == math.inf:
        raise QuadratureError("integrand needs more quadrature nodes than allowed", location=location)
    raise QuadratureError(
        f"panel refinement did not stabilise (last change {diff:.3g}, "
        f"tolerance {q.tail_tol * scale:.3g})",
        estimates=last_two,
        location=location,
        xi=worst_xi,
    )
