"""Command-line front end.

Exit codes:
    0   success (for analyze: s-asymptotic; wiener-check: condition holds;
        net-converge: converged)
    2   configuration or schema error, malformed input file
    3   precondition or capability failure (e.g. a Balian-Low lattice)
    4   numerical failure (quadrature, non-convergence)
    10  inconclusive verdict
    11  rejected verdict (negative result with a witness)
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from . import frame, growth, io
from .config import ExperimentConfig
from .errors import (CapabilityError, ConfigurationError, ConvergenceError, GaborError,
                     NumericError, PreconditionError, UsageError)
from .stft import gabor_coefficients

log = logging.getLogger("gabortauber")

EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_NUMERIC = 0, 2, 3, 4
EXIT_INCONCLUSIVE, EXIT_REJECTED = 10, 11
VERDICT_EXIT = {"s-asymptotic": EXIT_OK, "inconclusive": EXIT_INCONCLUSIVE, "rejected": EXIT_REJECTED}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ConfigurationError, UsageError)):
        return EXIT_CONFIG
    if isinstance(exc, (PreconditionError, CapabilityError)):
        return EXIT_PRECONDITION
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    return EXIT_CONFIG


def _eval_points(opts: dict, default=(-4.0, 4.0, 161)) -> np.ndarray:
    if "eval_points" in opts:
        return np.asarray(opts["eval_points"], dtype=float)
    lo, hi, n = opts.get("eval_range", default)
    if n < 1:
        raise ConfigurationError("eval_range needs a positive point count")
    return np.linspace(lo, hi, int(n))


def _bounds(cfg, psi, lat, args):
    return frame.estimate_frame_bounds(psi, lat, probes=cfg.options.get("probes", 50),
                                       q=cfg.quadrature(), seed=args.seed, force=args.force,
                                       power_iterations=cfg.options.get("power_iterations", 400))


def _dual(cfg, psi, lat, bounds, args):
    return frame.compute_dual_window(psi, lat, bounds, tol=cfg.tolerances.get("dual_tol", 1e-8),
                                     max_iterations=cfg.options.get("max_iterations", 200),
                                     force=args.force)


def _write_dual(out: Path, dual: frame.DualWindow) -> None:
    rows = [(t, g.real, g.imag) for t, g in zip(dual.t, dual.gamma_samples)]
    io.atomic_write(out / "dual.csv", io.csv_text(("t", "gamma_re", "gamma_im"), rows))
    io.write_json(out / "dual.json", dual.to_dict())


# ------------------------------------------------------------- commands


def cmd_stft(cfg: ExperimentConfig, out: Path, args) -> int:
    f, psi, lat = cfg.signal(), cfg.window(), cfg.lattice()
    grid = gabor_coefficients(f, psi, lat, cfg.quadrature(), threads=args.threads)
    io.write_grid(out / "coefficients.csv", grid)
    return EXIT_OK


def cmd_frame_bounds(cfg, out, args) -> int:
    psi, lat = cfg.window(), cfg.lattice()
    io.write_json(out / "frame_bounds.json", _bounds(cfg, psi, lat, args).to_dict())
    return EXIT_OK


def cmd_dual(cfg, out, args) -> int:
    psi, lat = cfg.window(), cfg.lattice()
    bounds = _bounds(cfg, psi, lat, args)
    try:
        dual = _dual(cfg, psi, lat, bounds, args)
    except ConvergenceError as exc:
        io.write_json(out / "dual_report.json", {
            "converged": False, "message": str(exc), "history": exc.history,
            "bounds": bounds.to_dict(), "alpha": lat.alpha, "beta": lat.beta})
        raise
    _write_dual(out, dual)
    decay = frame.verify_dual_decay(dual)
    io.write_json(out / "dual_decay.json", {"rate": decay.rate, "flag": decay.flag,
                                             "residual": decay.residual, "fit_range": decay.fit_range})
    return EXIT_OK


def cmd_reconstruct(cfg, out, args) -> int:
    f, psi, lat = cfg.signal(), cfg.window(), cfg.lattice()
    dual = _dual(cfg, psi, lat, _bounds(cfg, psi, lat, args), args)
    t = _eval_points(cfg.options)
    rec = frame.reconstruct(f, psi, dual, lat, t, cfg.quadrature(),
                            analysis=cfg.options.get("analysis", "psi"), threads=args.threads)
    ref = f(t)
    rows = [(x, v.real, v.imag, r.real, r.imag) for x, v, r in zip(t, rec.values, np.asarray(ref, complex))]
    io.atomic_write(out / "reconstruction.csv", io.csv_text(("t", "re", "im", "ref_re", "ref_im"), rows))
    io.write_json(out / "reconstruction.json", {"rel_error": rec.rel_error,
                                                 "tail_relative": rec.tail_relative,
                                                 "dual": dual.to_dict()})
    return EXIT_OK


def cmd_classify(cfg, out, args) -> int:
    if "grid" not in cfg.options:
        raise ConfigurationError("schema error: options.grid (path of the grid CSV) is required")
    lat = cfg.lattice() if "lattice" in cfg.raw else None
    grid = io.read_grid(cfg.path(cfg.options["grid"]), lat)
    io.write_json(out / "growth.json", growth.classify_grid_growth(grid).to_dict())
    return EXIT_OK


def cmd_net_converge(cfg, out, args) -> int:
    opts = cfg.options
    lat = cfg.lattice() if "lattice" in cfg.raw else None
    if "grids" in opts:
        net = [(g["lambda"], io.read_grid(cfg.path(g["path"]), lat)) for g in opts["grids"]]
    else:
        f, psi, lat, c = cfg.signal(), cfg.window(), cfg.lattice(), cfg.comparison()
        hs = opts.get("h_schedule") or asy.net_schedule(psi, lat, c, f, q=cfg.quadrature())
        net = asy.net_grids(f, psi, lat, c, hs, cfg.quadrature(), args.threads)
    rep = growth.detect_net_convergence(net, opts.get("mode", "exp-pol"),
                                        cfg.tolerances.get("node_tol", 1e-6))
    d = rep.to_dict()
    if rep.limit_grid is not None:
        io.write_grid(out / "limit_grid.csv", rep.limit_grid)
        d["limit_grid_ref"] = "limit_grid.csv"
    io.write_json(out / "net.json", d)
    return {"converged": EXIT_OK, "inconclusive": EXIT_INCONCLUSIVE}.get(rep.status, EXIT_REJECTED)


def _asym_config(cfg) -> asy.AsymptoticConfig:
    o, t = cfg.options, cfg.tolerances
    kw = {}
    if "x_schedule" in o:
        kw["x_schedule"] = tuple(o["x_schedule"])
    if "b_range" in o:
        kw["b_range"] = tuple(o["b_range"])
    for key in ("x_cap", "cross_validate"):
        if key in o:
            kw[key] = o[key]
    for key in ("cauchy_tol", "solve_tol", "node_tol"):
        if key in t:
            kw[key] = t[key]
    return asy.AsymptoticConfig(quadrature=cfg.quadrature(), **kw)


def cmd_analyze(cfg, out, args) -> int:
    theorem = args.theorem or cfg.options.get("theorem", "auto")
    f, psi, c = cfg.signal(), cfg.window(), cfg.comparison()
    acfg = replace(_asym_config(cfg), threads=args.threads)
    if theorem == "auto":
        theorem = "t43" if asy.wiener_condition_check(psi, c.limit_rate).holds else "t41"
        log.info("auto-selected %s", theorem)
    if theorem == "t41":
        rep = asy.verify_sasymptotics(f, psi, cfg.lattice(), c, acfg)
    elif theorem == "t42":
        rep = asy.monotone_tauberian(f, psi, c, cfg.options.get("n_set", (-2, -1, 0, 1, 2)), acfg)
    else:
        rep = asy.wiener_tauberian(f, psi, cfg.lattice(), c, cfg.options.get("tau", 1.0), acfg)
    io.write_json(out / "report.json", rep.to_dict())
    io.atomic_write(out / "trajectory.csv", io.csv_text(("x", "n", "re", "im"), rep.trajectory_rows()))
    if rep.verdict != "s-asymptotic":
        print(f"verdict: {rep.verdict}: {rep.diagnostics.get('reason', '')}", file=sys.stderr)
    return VERDICT_EXIT[rep.verdict]


def cmd_wiener_check(cfg, out, args) -> int:
    psi = cfg.window()
    if "b" in cfg.options:
        b = float(cfg.options["b"])
    else:
        b = cfg.comparison().limit_rate
    w = asy.wiener_condition_check(psi, b)
    io.write_json(out / "wiener.json", {"holds": w.holds, "witness": w.witness, "b": b,
                                         "min_ratio": w.min_ratio, "extent": w.extent})
    if not w.holds:
        print(f"Wiener condition fails near xi = {w.witness:.10g}", file=sys.stderr)
        return EXIT_REJECTED
    return EXIT_OK


COMMANDS = {
    "stft": cmd_stft,
    "dual": cmd_dual,
    "frame-bounds": cmd_frame_bounds,
    "reconstruct": cmd_reconstruct,
    "classify": cmd_classify,
    "net-converge": cmd_net_converge,
    "analyze": cmd_analyze,
    "wiener-check": cmd_wiener_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gabortauber",
                                description="Gabor-frame STFT analysis and S-asymptotic detection.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="JSON experiment config")
    p.add_argument("--out", default=None, help="output directory (default: config output_dir or .)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="seed for probe generation")
    p.add_argument("--force", action="store_true", help="run on lattices that cannot be frames")
    p.add_argument("--theorem", choices=("auto", "t41", "t42", "t43"), default=None,
                   help="detector used by analyze")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.seed < 0 or args.seed >= 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_CONFIG
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = ExperimentConfig.load(args.config)
        out = Path(args.out or cfg.raw.get("output_dir") or ".")
        if args.out is None and "output_dir" in cfg.raw:
            out = cfg.path(cfg.raw["output_dir"])
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out, args)
    except GaborError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
