"""Comparison functions c(h) = e^{bh} L(e^{|h|}) and their polynomial variant."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

L_KINDS = ("const", "log", "iterlog")
REGIMES = ("exponential", "polynomial")


@dataclass(frozen=True)
class SlowlyVarying:
    """Catalog slowly varying function.

    ``const``   L(u) = c0
    ``log``     L(u) = log(e + u)^a
    ``iterlog`` L(u) = log(log(e^e + u))^a
    """

    kind: str
    value: float = 1.0

    def __post_init__(self):
        if self.kind not in L_KINDS:
            raise ConfigurationError(f"unsupported slowly varying function {self.kind!r}")
        if not math.isfinite(self.value):
            raise ConfigurationError("slowly varying parameter must be finite")
        if self.kind == "const" and self.value <= 0:
            raise ConfigurationError("constant slowly varying function needs c0 > 0")

    @classmethod
    def parse(cls, spec: str) -> "SlowlyVarying":
        """Parse ``"const:1"``, ``"log:2"`` or ``"iterlog:1"``."""
        if not isinstance(spec, str):
            raise ConfigurationError(f"L spec must be a string, got {spec!r}")
        kind, _, arg = spec.partition(":")
        kind = kind.strip()
        if kind not in L_KINDS:
            raise ConfigurationError(f"unsupported slowly varying function {spec!r}")
        try:
            value = float(arg) if arg else 1.0
        except ValueError:
            raise ConfigurationError(f"bad parameter in L spec {spec!r}") from None
        return cls(kind, value)

    def log_at_log(self, log_u: np.ndarray) -> np.ndarray:
        """log L(u) given log u; stays finite for huge u."""
        log_u = np.asarray(log_u, dtype=float)
        if self.kind == "const":
            return np.full_like(log_u, math.log(self.value))
        if self.kind == "log":
            return self.value * np.log(np.logaddexp(1.0, log_u))
        return self.value * np.log(np.log(np.logaddexp(math.e, log_u)))

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return np.exp(self.log_at_log(np.log(u)))

    def spec(self) -> str:
        return f"{self.kind}:{self.value:g}"


@dataclass(frozen=True)
class ComparisonFunction:
    b: float = 0.0
    L: SlowlyVarying = field(default_factory=lambda: SlowlyVarying("const", 1.0))
    regime: str = "exponential"
    nu: float = 0.0
    negative_rate: float | None = None

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ConfigurationError(f"unknown comparison regime {self.regime!r}")
        if isinstance(self.L, str):
            object.__setattr__(self, "L", SlowlyVarying.parse(self.L))
        if not isinstance(self.L, SlowlyVarying):
            raise ConfigurationError(f"unsupported slowly varying function {self.L!r}")
        for name in ("b", "nu"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"comparison parameter {name} must be finite")
        if self.regime == "polynomial" and self.b != 0:
            raise ConfigurationError("polynomial comparisons carry no exponential rate (b must be 0)")
        if self.negative_rate is not None and not math.isfinite(self.negative_rate):
            raise ConfigurationError("negative-side rate must be finite")

    @property
    def limit_rate(self) -> float:
        """The b in c(x+h)/c(h) -> e^{bx}."""
        return self.b if self.regime == "exponential" else 0.0

    def log_eval(self, h) -> np.ndarray:
        h = np.asarray(h, dtype=float)
        ah = np.abs(h)
        if self.regime == "exponential":
            out = self.b * h + self.L.log_at_log(ah)
        else:
            out = self.nu * np.log1p(ah) + self.L.log_at_log(np.log1p(ah))
        if self.negative_rate is not None:
            out = np.where(h <= 0, -self.negative_rate * h, out)
        return out

    def __call__(self, h) -> np.ndarray:
        return np.exp(self.log_eval(h))

    def envelope_constants(self) -> tuple[float, float]:
        """(r, A) with c(x+h)/c(h) <= A e^{r|x|} for h >= 1."""
        a = abs(self.L.value) if self.L.kind != "const" else 0.0
        if self.regime == "exponential":
            r = abs(self.b) + a
        else:
            r = abs(self.nu) + a
        A = 1.0
        if self.negative_rate is not None:
            # the extension may jump at 0, and c(h) on the positive side may be small
            c0 = float(np.exp(self.L.log_at_log(np.array(0.0))))
            r = r + abs(self.negative_rate)
            A = max(1.0, c0, 1.0 / c0) * math.e**a
        # head-room for rounding in the ratio
        return r, A * (1 + 1e-9)

    def to_dict(self) -> dict:
        d = {"b": self.b, "L": self.L.spec(), "regime": self.regime}
        if self.regime == "polynomial":
            d["nu"] = self.nu
        if self.negative_rate is not None:
            d["negative_rate"] = self.negative_rate
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ComparisonFunction":
        if not isinstance(d, dict):
            raise ConfigurationError("comparison spec must be an object")
        known = {"b", "L", "regime", "nu", "negative_rate"}
        extra = set(d) - known
        if extra:
            raise ConfigurationError(f"unknown comparison keys: {sorted(extra)}")
        return cls(
            b=float(d.get("b", 0.0)),
            L=SlowlyVarying.parse(d.get("L", "const:1")),
            regime=d.get("regime", "exponential"),
            nu=float(d.get("nu", 0.0)),
            negative_rate=None if d.get("negative_rate") is None else float(d["negative_rate"]),
        )


def comparison_eval(c: ComparisonFunction, h: float) -> float:
    with np.errstate(over="ignore", under="ignore"):
        val = float(c(h))
    if not (val > 0 and math.isfinite(val)):
        raise ConfigurationError(f"comparison function leaves floating-point range at h={h}")
    return val
