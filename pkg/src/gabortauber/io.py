"""Deterministic file output and grid/table parsing."""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ConfigurationError
from .model import CoefficientGrid, Lattice


def fmt(x: float) -> str:
    return "%.17g" % float(x)


def _clean(obj):
    # JSON cannot carry complex numbers, numpy scalars or non-finite floats
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return float(fmt(v))
    return obj


def atomic_write(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def dumps_json(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj) -> Path:
    return atomic_write(path, dumps_json(obj))


def csv_text(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(v if isinstance(v, str) else (str(v) if isinstance(v, (int, np.integer)) else fmt(v))
                              for v in r))
    return "\n".join(lines) + "\n"


def write_grid(path, grid: CoefficientGrid) -> tuple[Path, Path]:
    """CSV "k,n,re,im" (k-major) plus a JSON sidecar with the lattice."""
    path = Path(path)
    lat = grid.lattice
    rows = []
    for i, k in enumerate(lat.ks):
        for j, n in enumerate(lat.ns):
            v = grid.values[i, j]
            rows.append((int(k), int(n), v.real, v.imag))
    atomic_write(path, csv_text(("k", "n", "re", "im"), rows))
    meta = {**lat.to_dict(), "signal_id": grid.signal_id, "window_id": grid.window_id}
    side = path.with_suffix(".json")
    write_json(side, meta)
    return path, side


def read_grid(path, lattice: Lattice | None = None) -> CoefficientGrid:
    """Parse a "k,n,re,im" CSV.

    The lattice comes from ``lattice``, else from the JSON sidecar, else the
    index ranges in the file with alpha = beta = 1.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"grid file not found: {path}")
    entries = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["k", "n", "re", "im"]:
            raise ConfigurationError(f"{path}:1: expected header 'k,n,re,im'")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ConfigurationError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            try:
                k, n = int(row[0]), int(row[1])
                re, im = float(row[2]), float(row[3])
            except ValueError:
                raise ConfigurationError(f"{path}:{lineno}: malformed entry") from None
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ConfigurationError(f"{path}:{lineno}: non-finite value")
            if (k, n) in entries:
                raise ConfigurationError(f"{path}:{lineno}: duplicate node ({k},{n})")
            entries[(k, n)] = complex(re, im)
    if not entries:
        raise ConfigurationError(f"{path}: no grid rows")
    meta = {}
    side = path.with_suffix(".json")
    if lattice is None and side.exists():
        try:
            meta = json.loads(side.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{side}: {exc}") from None
        lattice = Lattice(meta["alpha"], meta["beta"], tuple(meta["k_range"]), tuple(meta["n_range"]))
    if lattice is None:
        ks = [k for k, _ in entries]
        ns = [n for _, n in entries]
        lattice = Lattice(1.0, 1.0, (min(ks), max(ks)), (min(ns), max(ns)))
    vals = np.zeros(lattice.shape, dtype=complex)
    k0, n0 = lattice.k_range[0], lattice.n_range[0]
    for (k, n), v in entries.items():
        i, j = k - k0, n - n0
        if not (0 <= i < vals.shape[0] and 0 <= j < vals.shape[1]):
            raise ConfigurationError(f"{path}: node ({k},{n}) lies outside the lattice ranges")
        vals[i, j] = v
    if len(entries) != vals.size:
        raise ConfigurationError(f"{path}: grid has {len(entries)} rows, lattice needs {vals.size}")
    return CoefficientGrid(lattice, vals, meta.get("signal_id", ""), meta.get("window_id", ""))
