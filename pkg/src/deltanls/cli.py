"""Command-line front end.

    delta-nls <command> --config <path> [--set key=value ...] [--out dir]

Commands: solve, scalar, sweep, thresholds, regimes, limit, asymptotics,
selftest.  Artifacts are written to the output directory: one JSON
document per run, flat CSV tables, and optional SVG plots.  All numbers
are serialized with 17 significant digits, so identical config + seed
produce byte-identical outputs.

Exit codes: 0 success, 1 configuration error, 2 solver non-convergence
(a best-iterate dump is still written), 3 I/O failure.  Errors are
reported as machine-readable JSON on stdout.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import phase, svgplot
from .config import (
    COMMANDS,
    ConfigError,
    RunConfig,
    apply_override,
    emit_config,
    parse_config,
    validate,
)
from .grid import make_grid
from .model import Params
from .solver import (
    ConvergenceError,
    GroundState,
    default_grid,
    minimize_coupled,
    minimize_limit,
    minimize_scalar_point,
    minimize_scalar_regular,
)


def _fmt(x: float) -> str:
    """17-significant-digit decimal, round-trip exact for doubles."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if not np.isfinite(x):
        return '"nan"' if np.isnan(x) else ('"inf"' if x > 0 else '"-inf"')
    return format(float(x), ".17g")


def _json(obj, indent: int = 0) -> str:
    """Deterministic JSON writer with fixed float formatting."""
    pad = "  " * indent
    pad1 = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad1}"{k}": {_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in seq):
            return "[" + ", ".join(_json(v) for v in seq) + "]"
        items = [f"{pad1}{_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _grid_for(cfg: RunConfig, params: Params):
    if cfg.r_max > 0.0:
        return make_grid(cfg.r_max, cfg.n, cfg.grading)
    return default_grid(params, cfg.n) if cfg.n != 4096 else default_grid(params)


def _state_record(gs: GroundState, params: Params, classification: str | None) -> dict:
    g = gs.state.v.grid
    return {
        "alpha": params.alpha,
        "omega": params.omega,
        "omega_tilde": params.omega_tilde,
        "beta": params.beta,
        "lambda": gs.state.u.lam,
        "q": gs.state.u.q,
        "level": gs.level,
        "grid": {"n": g.n, "r_max": g.r_max, "grading": g.grading},
        "phi": gs.state.u.phi.values,
        "v": gs.state.v.values,
        "residuals": {
            "grad_norm": gs.residuals.grad_norm,
            "boundary_residual": gs.residuals.boundary_residual,
            "nehari_residual": gs.residuals.nehari_residual,
            "clipped_at_convergence": gs.residuals.clipped_at_convergence,
        },
        "classification": classification,
    }


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _profile_csv(grid, values) -> str:
    lines = ["r,value"]
    lines += [f"{_fmt(r)},{_fmt(v)}" for r, v in zip(grid.nodes, values)]
    return "\n".join(lines) + "\n"


def _profile_svg(gs: GroundState, title: str) -> str:
    fig = svgplot.Figure(title=title, xlabel="r", ylabel="amplitude")
    g = gs.state.v.grid
    fig.add(g.nodes, gs.state.u.phi.values, label="phi")
    fig.add(g.nodes, gs.state.v.values, label="v")
    return svgplot.render(fig)


def _emit_state(out: Path, cfg: RunConfig, gs: GroundState, params: Params, stem: str) -> None:
    try:
        label = phase.classify(gs).label
    except phase.PhaseError:
        label = None
    _write(out / f"{stem}.json", _json(_state_record(gs, params, label)) + "\n")
    if "csv" in cfg.formats:
        g = gs.state.v.grid
        _write(out / f"{stem}_phi.csv", _profile_csv(g, gs.state.u.phi.values))
        _write(out / f"{stem}_v.csv", _profile_csv(g, gs.state.v.values))
    if "svg" in cfg.formats:
        _write(out / f"{stem}.svg", _profile_svg(gs, stem))


def _cmd_solve(cfg: RunConfig, out: Path) -> None:
    params = cfg.params()
    gs = minimize_coupled(params, cfg.solve_options(), _grid_for(cfg, params))
    _emit_state(out, cfg, gs, params, "ground_state")


def _cmd_scalar(cfg: RunConfig, out: Path) -> None:
    params = cfg.params()
    grid = _grid_for(cfg, params)
    if cfg.scalar_component == "u":
        gs = minimize_scalar_point(cfg.omega, cfg.alpha, cfg.solve_options(), grid)
    else:
        gs = minimize_scalar_regular(cfg.omega_tilde, cfg.solve_options(), grid)
    _emit_state(out, cfg, gs, gs.state.params, "scalar_state")


def _cmd_limit(cfg: RunConfig, out: Path) -> None:
    params = cfg.params()
    gs = minimize_limit(params, cfg.solve_options(), _grid_for(cfg, params))
    _emit_state(out, cfg, gs, params, "limit_state")


def _sweep_csv(rows: list[phase.SweepRow]) -> str:
    lines = ["beta,c_beta,c0_beta,q,norm_u,norm_v,class,beta_c"]
    for r in rows:
        label = r.classification.label if r.classification else "failed"
        lines.append(
            f"{_fmt(r.beta)},{_fmt(r.c_beta)},{_fmt(r.c0_beta)},{_fmt(r.q)},"
            f"{_fmt(r.norm_u)},{_fmt(r.norm_v)},{label},{_fmt(r.beta_c)}"
        )
    return "\n".join(lines) + "\n"


def _cmd_sweep(cfg: RunConfig, out: Path) -> None:
    params = cfg.params()
    rows = phase.sweep_beta(
        params, list(cfg.sweep_betas), cfg.solve_options(), _grid_for(cfg, params)
    )
    if "csv" in cfg.formats:
        _write(out / "sweep.csv", _sweep_csv(rows))
    record = {
        "command": "sweep",
        "rows": [
            {
                "beta": r.beta,
                "c_beta": r.c_beta,
                "c0_beta": r.c0_beta,
                "q": r.q,
                "norm_u": r.norm_u,
                "norm_v": r.norm_v,
                "class": r.classification.label if r.classification else "failed",
                "beta_c": r.beta_c,
                "failed": r.failed,
                "note": r.note,
            }
            for r in rows
        ],
    }
    _write(out / "sweep.json", _json(record) + "\n")
    if "svg" in cfg.formats:
        fig = svgplot.Figure(title="levels along beta", xlabel="beta", ylabel="level")
        betas = [r.beta for r in rows]
        fig.add(betas, [r.c_beta for r in rows], label="c_beta")
        fig.add(betas, [r.c0_beta for r in rows], label="c0_beta")
        _write(out / "sweep.svg", svgplot.render(fig))


def _cmd_thresholds(cfg: RunConfig, out: Path) -> None:
    params = cfg.params()
    grid = _grid_for(cfg, params)
    opts = cfg.solve_options()
    bstar = phase.beta_star(params, cfg.bracket, cfg.bisect_tol, opts, grid, cfg.margin)
    bzero = phase.beta_zero(params, cfg.bracket, cfg.bisect_tol, opts, grid, cfg.margin)
    record = {
        "command": "thresholds",
        "beta_star": bstar,
        "beta_zero": bzero,
        "bracket": list(cfg.bracket),
        "tol": cfg.bisect_tol,
        "margin": cfg.margin,
    }
    _write(out / "thresholds.json", _json(record) + "\n")


def _cmd_regimes(cfg: RunConfig, out: Path) -> None:
    cells = phase.regime_table(
        cfg.alpha,
        cfg.omega,
        cfg.solve_options(),
        cfg.omega_tilde_factors,
        cfg.beta_offset,
        cfg.bracket,
        grid_n=cfg.n,
    )
    if "csv" in cfg.formats:
        lines = ["omega_tilde,beta,regime,observed,predicted,match"]
        for c in cells:
            lines.append(
                f"{_fmt(c.omega_tilde)},{_fmt(c.beta)},{c.regime},"
                f'"{c.observed}","{c.predicted}",{str(c.match).lower()}'
            )
        _write(out / "regimes.csv", "\n".join(lines) + "\n")
    record = {
        "command": "regimes",
        "cells": [
            {
                "omega_tilde": c.omega_tilde,
                "beta": c.beta,
                "regime": c.regime,
                "observed": c.observed,
                "predicted": c.predicted,
                "match": c.match,
                "failed": c.failed,
                "note": c.note,
            }
            for c in cells
        ],
    }
    _write(out / "regimes.json", _json(record) + "\n")
    if "svg" in cfg.formats:
        fig = svgplot.Figure(title="regime table", xlabel="omega_tilde", ylabel="beta")
        for c in cells:
            if c.failed:
                continue
            dx = 0.04 * max(c.omega_tilde, 1.0)
            dy = 0.1
            x = np.array([c.omega_tilde - dx, c.omega_tilde + dx,
                          c.omega_tilde + dx, c.omega_tilde - dx])
            y = np.array([c.beta - dy, c.beta - dy, c.beta + dy, c.beta + dy])
            fig.add(x, y, color="#2ca02c" if c.match else "#d62728", closed=True)
        _write(out / "regimes.svg", svgplot.render(fig))


def _cmd_asymptotics(cfg: RunConfig, out: Path) -> None:
    params = cfg.params()
    report = phase.asymptotic_check(
        params, cfg.asym_betas, cfg.solve_options(), _grid_for(cfg, params)
    )
    if "csv" in cfg.formats:
        lines = ["beta,c_beta,beta_c,gap,charge_scaled"]
        for r in report.rows:
            lines.append(
                f"{_fmt(r.beta)},{_fmt(r.c_beta)},{_fmt(r.beta_c)},"
                f"{_fmt(r.gap)},{_fmt(r.charge_scaled)}"
            )
        _write(out / "asymptotics.csv", "\n".join(lines) + "\n")
    record = {
        "command": "asymptotics",
        "c_inf": report.c_inf,
        "state_distance": report.state_distance,
        "rows": [
            {
                "beta": r.beta,
                "c_beta": r.c_beta,
                "beta_c": r.beta_c,
                "gap": r.gap,
                "charge_scaled": r.charge_scaled,
            }
            for r in report.rows
        ],
    }
    _write(out / "asymptotics.json", _json(record) + "\n")
    if "svg" in cfg.formats:
        fig = svgplot.Figure(title="beta * c_beta vs limit", xlabel="beta", ylabel="beta * c_beta")
        betas = [r.beta for r in report.rows]
        fig.add(betas, [r.beta_c for r in report.rows], label="beta*c_beta")
        fig.add(betas, [report.c_inf] * len(betas), label="c_inf")
        _write(out / "asymptotics.svg", svgplot.render(fig))


def _cmd_selftest(cfg: RunConfig, out: Path) -> None:
    """Fast analytic identity suite: special functions and model algebra."""
    from . import model, specfun
    from .grid import integrate, sample

    checks: list[tuple[str, float, float]] = []  # (name, error, tolerance)
    rng = np.random.default_rng(0)
    alphas = rng.uniform(-3.0, 3.0, size=100)
    err = max(
        abs(a + specfun.theta(specfun.omega_alpha(a))) for a in alphas
    )
    checks.append(("alpha + theta(omega_alpha(alpha)) = 0", float(err), 1e-12))
    for lam in (0.5, 1.0, 2.0, 5.0, 10.0):
        g = make_grid(40.0 / np.sqrt(lam), 4096, 2.0)
        quad = integrate(sample(g, lambda r: specfun.green_value(lam, r) ** 2))
        exact = 1.0 / (4.0 * np.pi * lam)
        checks.append((f"green mass lambda={lam}", abs(quad / exact - 1.0), 1e-6))
    params = Params(alpha=0.0, omega=2.0, omega_tilde=1.0, beta=1.0)
    g = default_grid(params)
    phi = sample(g, lambda r: np.exp(-r * r))
    v = sample(g, lambda r: np.exp(-0.5 * r * r))
    state = model.CoupledState(
        model.Decomposition(phi, 0.5, params.omega), v, params
    )
    rep = model.energy(state)
    checks.append(
        ("nehari identity G = 2I - J*0 form", abs(rep.G - (rep.A - rep.B - 2 * params.beta * rep.C)), 1e-12)
    )
    proj = model.nehari_project(state)
    checks.append(("projection zeroes G", abs(model.energy(proj).G), 1e-9))
    two = state.scaled(2.0)
    rep2 = model.energy(two)
    checks.append(("A homogeneity degree 2", abs(rep2.A - 4.0 * rep.A), 1e-9 * rep.A))
    checks.append(("B homogeneity degree 4", abs(rep2.B - 16.0 * rep.B), 1e-9 * max(rep.B, 1.0)))
    record = {
        "command": "selftest",
        "checks": [
            {"name": name, "error": err, "tol": tol, "passed": err <= tol}
            for name, err, tol in checks
        ],
        "passed": all(err <= tol for _, err, tol in checks),
    }
    _write(out / "selftest.json", _json(record) + "\n")
    if not record["passed"]:
        raise ConvergenceError("selftest identities failed")


_DISPATCH = {
    "solve": _cmd_solve,
    "scalar": _cmd_scalar,
    "sweep": _cmd_sweep,
    "thresholds": _cmd_thresholds,
    "regimes": _cmd_regimes,
    "limit": _cmd_limit,
    "asymptotics": _cmd_asymptotics,
    "selftest": _cmd_selftest,
}


def _error_json(kind: str, message: str, extra: dict | None = None) -> str:
    record = {"error": kind, "message": message}
    if extra:
        record.update(extra)
    return _json(record) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="delta-nls",
        description="Ground states of the 2D coupled cubic NLS system "
        "with a point interaction at the origin.",
    )
    parser.add_argument("command", choices=COMMANDS + ("emit-config",))
    parser.add_argument("--config", type=str, default=None, help="path to a key=value config file")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="override one config key (repeatable)",
    )
    parser.add_argument("--out", type=str, default=None, help="output directory")
    args = parser.parse_args(argv)

    try:
        if args.config is not None:
            cfg = parse_config(Path(args.config).read_text())
        else:
            cfg = RunConfig()
        if args.command != "emit-config":
            cfg.command = args.command
        for item in args.overrides:
            if "=" not in item:
                raise ConfigError(f"--set {item!r}: expected KEY=VALUE")
            key, value = item.split("=", 1)
            apply_override(cfg, key.strip(), value.strip())
        if args.out is not None:
            cfg.directory = args.out
        validate(cfg)
    except OSError as exc:
        sys.stdout.write(_error_json("io", str(exc)))
        return 3
    except ConfigError as exc:
        sys.stdout.write(_error_json("config", str(exc)))
        return 1

    if args.command == "emit-config":
        sys.stdout.write(emit_config(cfg))
        return 0

    out = Path(cfg.directory)
    try:
        _DISPATCH[cfg.command](cfg, out)
    except ConvergenceError as exc:
        extra = {}
        if exc.best is not None:
            dump = _state_record(exc.best, exc.best.state.params, None)
            try:
                _write(out / "best_iterate.json", _json(dump) + "\n")
                extra["best_iterate"] = "best_iterate.json"
            except OSError:
                pass
            extra["level"] = exc.best.level
            extra["grad_norm"] = exc.best.residuals.grad_norm
        sys.stdout.write(_error_json("non-convergence", str(exc), extra))
        return 2
    except phase.PhaseError as exc:
        sys.stdout.write(_error_json("phase", str(exc)))
        return 2
    except OSError as exc:
        sys.stdout.write(_error_json("io", str(exc)))
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
