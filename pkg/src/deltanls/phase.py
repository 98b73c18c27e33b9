"""Parameter-space analysis on top of the solver.

Classifies minimizers (scalar/vector x regular/singular), sweeps the
coupling strength, bisects the two thresholds where the levels start to
drop below their uncoupled values, reproduces the regime table, and
checks the large-coupling asymptotics against the limit problem.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import grid as gridmod
from .grid import Field, Grid
from .model import CoupledState, Params
from .solver import (
    ConvergenceError,
    GroundState,
    SolveOptions,
    default_grid,
    minimize_coupled,
    minimize_limit,
    minimize_scalar_point,
    minimize_scalar_regular,
)


class PhaseError(RuntimeError):
    pass


class BracketError(PhaseError):
    """Bisection bracket does not straddle the predicate."""


@dataclass(frozen=True)
class ClassTols:
    component_tol: float = 1e-3
    charge_tol: float = 1e-3


@dataclass(frozen=True)
class Classification:
    vectorness: str  # 'scalar-u' | 'scalar-v' | 'vector'
    regularity: str  # 'regular' | 'singular'
    tols: ClassTols

    @property
    def label(self) -> str:
        return f"{self.vectorness} {self.regularity}"


def component_norms(state: CoupledState) -> tuple[float, float]:
    """Energy norms of the two components: (|u|_{alpha,omega}, |v|_{H^1_ot})."""
    from .model import quadratic_form

    p = state.params
    zero_v = CoupledState(state.u, Field(state.v.grid), p)
    nu2 = quadratic_form(zero_v)
    nv2 = quadratic_form(state) - nu2
    return float(np.sqrt(max(nu2, 0.0))), float(np.sqrt(max(nv2, 0.0)))


def classify(gs: GroundState, tols: ClassTols = ClassTols()) -> Classification:
    """Thresholded scalar/vector x regular/singular classification."""
    if not np.isfinite(gs.residuals.grad_norm) or gs.residuals.nehari_residual > 1e-8:
        raise PhaseError("refusing to classify an unconverged ground state")
    nu, nv = component_norms(gs.state)
    total = float(np.sqrt(gs.report.A))
    if nv <= tols.component_tol * total:
        vectorness = "scalar-u"
    elif nu <= tols.component_tol * total:
        vectorness = "scalar-v"
    else:
        vectorness = "vector"
    regularity = "regular" if gs.state.u.q <= tols.charge_tol * total else "singular"
    return Classification(vectorness, regularity, tols)


@dataclass
class SweepRow:
    beta: float
    c_beta: float
    c0_beta: float
    classification: Classification | None
    q: float
    norm_u: float
    norm_v: float
    beta_c: float
    failed: bool = False
    note: str = ""


def _solve_both(params: Params, beta: float, options, grid) -> tuple[GroundState, GroundState]:
    p = replace(params, beta=beta, interaction="point")
    p0 = replace(params, beta=beta, interaction="none")
    return minimize_coupled(p, options, grid), minimize_coupled(p0, options, grid)


def sweep_beta(
    params: Params,
    betas: list[float],
    options: SolveOptions | None = None,
    grid: Grid | None = None,
    tols: ClassTols = ClassTols(),
) -> list[SweepRow]:
    """One row per beta with both levels; rows that violate the monotone or
    limit-level bounds are marked failed rather than aborting the sweep."""
    if sorted(betas) != list(betas):
        raise PhaseError("betas must be sorted ascending")
    grid = grid or default_grid(params)
    c_inf = minimize_limit(params, options, grid).level
    rows: list[SweepRow] = []
    prev_c = np.inf
    for beta in betas:
        try:
            gs, gs0 = _solve_both(params, beta, options, grid)
        except ConvergenceError as exc:
            rows.append(
                SweepRow(beta, np.nan, np.nan, None, np.nan, np.nan, np.nan, np.nan,
                         failed=True, note=str(exc))
            )
            continue
        nu, nv = component_norms(gs.state)
        row = SweepRow(
            beta=beta,
            c_beta=gs.level,
            c0_beta=gs0.level,
            classification=classify(gs, tols),
            q=gs.state.u.q,
            norm_u=nu,
            norm_v=nv,
            beta_c=beta * gs.level,
        )
        if gs.level > prev_c + 1e-6 * abs(prev_c):
            row.failed, row.note = True, "level increased along beta"
        if beta > 0.0 and beta * gs.level >= c_inf:
            row.failed, row.note = True, "beta * c_beta reached the limit level"
        if gs.level > gs0.level + 1e-6 * max(1.0, abs(gs0.level)):
            row.failed, row.note = True, "c_beta exceeded c0_beta"
        prev_c = min(prev_c, gs.level)
        rows.append(row)
    return rows


def _bisect_threshold(level_fn, c_base: float, bracket, tol: float, margin: float):
    """Largest beta at which level_fn(beta) still equals c_base, by bisection
    on the predicate level < c_base * (1 - margin)."""
    lo, hi = bracket
    if lo < 0.0 or hi <= lo:
        raise BracketError("bracket must satisfy 0 <= lo < hi")

    def dropped(beta: float) -> bool:
        return level_fn(beta) < c_base * (1.0 - margin)

    if dropped(lo):
        raise BracketError("level already below the base value at the lower bracket")
    if not dropped(hi):
        raise BracketError("level has not dropped at the upper bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dropped(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def beta_star(
    params: Params,
    bracket: tuple[float, float] = (0.0, 30.0),
    tol: float = 1e-2,
    options: SolveOptions | None = None,
    grid: Grid | None = None,
    margin: float = 1e-4,
) -> float:
    """Largest beta with c_beta = c_0, located by margin-predicate bisection."""
    grid = grid or default_grid(params)

    def level(beta: float) -> float:
        return minimize_coupled(replace(params, beta=beta), options, grid).level

    return _bisect_threshold(level, level(bracket[0]), bracket, tol, margin)


def beta_zero(
    params: Params,
    bracket: tuple[float, float] = (0.0, 30.0),
    tol: float = 1e-2,
    options: SolveOptions | None = None,
    grid: Grid | None = None,
    margin: float = 1e-4,
) -> float:
    """Largest beta with c0_beta = c0_0 (interaction-free analogue)."""
    grid = grid or default_grid(params)
    p0 = replace(params, interaction="none")

    def level(beta: float) -> float:
        return minimize_coupled(replace(p0, beta=beta), options, grid).level

    return _bisect_threshold(level, level(bracket[0]), bracket, tol, margin)


@dataclass
class RegimeCell:
    omega_tilde: float
    beta: float
    regime: str  # which side of the thresholds this cell probes
    observed: str
    predicted: str
    match: bool
    failed: bool = False
    note: str = ""


def _predicted_regime(d_point: float, d_reg: float, below_star: bool) -> str:
    if not below_star:
        return "vector singular"
    if d_point > d_reg:
        return "scalar-v regular"
    if d_point < d_reg:
        return "scalar-u singular"
    return "scalar-v regular or scalar-u singular"


def regime_table(
    alpha: float,
    omega: float,
    options: SolveOptions | None = None,
    omega_tilde_factors: tuple[float, ...] = (0.6, 1.0, 1.6),
    beta_offset: float = 0.2,
    beta_star_bracket: tuple[float, float] = (0.0, 30.0),
    tols: ClassTols = ClassTols(),
    grid_n: int = 4096,
) -> list[RegimeCell]:
    """Observed vs predicted minimizer type around the two axes of the
    phase diagram: omega_tilde relative to d(omega)/d0(1), beta relative
    to the coupling threshold."""
    d_point = minimize_scalar_point(omega, alpha, options).level
    d0_unit = minimize_scalar_regular(1.0, options).level
    ot_star = d_point / d0_unit  # omega_tilde at which d(omega) = d0(omega_tilde)
    cells: list[RegimeCell] = []
    for factor in omega_tilde_factors:
        ot = factor * ot_star
        params = Params(alpha=alpha, omega=omega, omega_tilde=ot)
        grid = default_grid(params, grid_n)
        d_reg = d0_unit * ot
        try:
            bstar = beta_star(params, beta_star_bracket, options=options, grid=grid)
        except (BracketError, ConvergenceError) as exc:
            cells.append(
                RegimeCell(ot, np.nan, "n/a", "n/a", "n/a", False, True, str(exc))
            )
            continue
        for offset in (-beta_offset, beta_offset):
            beta = max(0.0, bstar + offset)
            below = offset < 0.0
            predicted = _predicted_regime(d_point, d_reg, below)
            try:
                gs = minimize_coupled(replace(params, beta=beta), options, grid)
                cls = classify(gs, tols)
                observed = cls.label
            except ConvergenceError as exc:
                cells.append(
                    RegimeCell(ot, beta, "below" if below else "above",
                               "n/a", predicted, False, True, str(exc))
                )
                continue
            match = observed in predicted
            cells.append(
                RegimeCell(ot, beta, "below" if below else "above",
                           observed, predicted, match)
            )
    return cells


@dataclass
class AsymptoticRow:
    beta: float
    c_beta: float
    beta_c: float
    gap: float  # (c_inf - beta * c_beta) / c_inf
    charge_scaled: float  # sqrt(beta) * q


@dataclass
class AsymptoticReport:
    c_inf: float
    rows: list[AsymptoticRow]
    state_distance: float  # energy-norm distance of the rescaled minimizer


def asymptotic_check(
    params: Params,
    betas: tuple[float, ...] = (25.0, 50.0, 100.0),
    options: SolveOptions | None = None,
    grid: Grid | None = None,
) -> AsymptoticReport:
    """beta * c_beta against the limit level, plus the distance between the
    sqrt(beta)-rescaled minimizer and the limit-problem minimizer."""
    if list(betas) != sorted(betas) or betas[-1] < 100.0:
        raise PhaseError("betas must be increasing with max >= 100")
    grid = grid or default_grid(params)
    limit_gs = minimize_limit(params, options, grid)
    c_inf = limit_gs.level
    rows = []
    last_gs = None
    for beta in betas:
        gs = minimize_coupled(replace(params, beta=beta), options, grid)
        rows.append(
            AsymptoticRow(
                beta=beta,
                c_beta=gs.level,
                beta_c=beta * gs.level,
                gap=(c_inf - beta * gs.level) / c_inf,
                charge_scaled=float(np.sqrt(beta)) * gs.state.u.q,
            )
        )
        last_gs = gs
    dist = _rescaled_distance(last_gs, limit_gs, float(betas[-1]))
    return AsymptoticReport(c_inf=c_inf, rows=rows, state_distance=dist)


def _rescaled_distance(gs: GroundState, limit_gs: GroundState, beta: float) -> float:
    """Energy-norm distance between sqrt(beta) * (coupled minimizer) and the
    limit minimizer, both projected onto the limit Nehari manifold."""
    from .model import Decomposition, limit_energy, quadratic_form

    scaled = gs.state.scaled(float(np.sqrt(beta)))
    scaled = scaled.scaled(limit_energy(scaled).t0)
    ref = limit_gs.state
    diff_phi = Field(scaled.v.grid, scaled.u.phi.values - ref.u.phi.values)
    diff_u = Decomposition(diff_phi, scaled.u.q - ref.u.q, scaled.u.lam)
    diff_v = Field(scaled.v.grid, scaled.v.values - ref.v.values)
    diff = CoupledState(diff_u, diff_v, scaled.params)
    return float(np.sqrt(max(quadratic_form(diff), 0.0)))
