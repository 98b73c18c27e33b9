"""Ground states by minimization of the Nehari quotient.

The objective is the scale-invariant ray maximum Q = A^2 / (4 (kappa B +
2 beta C)); its infimum over nonzero states is the ground-state level.
Descent directions are preconditioned with the quadratic-form operator
(stiffness + mass), which keeps the iteration count mesh-independent,
and iterates are clipped at zero (minimizers are nonnegative).  The
Nehari projection is a closed-form scaling applied once at the end.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.optimize
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import model as mdl
from .grid import Field, Grid, default_r_max, make_grid, value_at_origin
from .model import (
    CoupledState,
    Decomposition,
    DegenerateRayError,
    EnergyReport,
    Params,
)
from .specfun import theta


class ConvergenceError(RuntimeError):
    """Descent failed to reach the gradient tolerance; carries the best iterate."""

    def __init__(self, message: str, best: Optional["GroundState"] = None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class SolveOptions:
    max_iters: int = 20000
    grad_tol: float = 1e-7
    step_init: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not self.grad_tol > 0.0:
            raise ValueError("grad_tol must be positive")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError("shrink must lie in (0, 1)")
        if not 0.0 < self.armijo <= 0.5:
            raise ValueError("armijo constant must lie in (0, 0.5]")


@dataclass(frozen=True)
class Residuals:
    grad_norm: float
    boundary_residual: float
    nehari_residual: float
    clipped_at_convergence: bool = False


@dataclass
class GroundState:
    """Converged, Nehari-projected minimizer with diagnostics."""

    state: CoupledState
    level: float
    report: EnergyReport
    residuals: Residuals
    classification: object | None = None


def default_grid(params: Params, n: int = 4096) -> Grid:
    """Reference grid: r_max = 40 / sqrt(min(omega_tilde, omega)), grading 2."""
    return make_grid(default_r_max(min(params.omega, params.omega_tilde)), n, 2.0)


def _stiffness(grid: Grid) -> sp.csc_matrix:
    """Sparse matrix K with f^T K f = dirichlet_energy(f)."""
    r = grid.nodes
    n = grid.n
    dr = np.diff(r)
    c = np.pi * (r[:-1] + r[1:]) / dr
    main = np.zeros(n)
    main[:-1] += c
    main[1:] += c
    k = sp.diags([main, -c, -c], [0, -1, 1], format="lil")
    # first panel: pi * (f_1 - f(0))^2 with quadratically extrapolated f(0)
    r0, r1, r2 = r[:3]
    l0 = (r1 * r2) / ((r0 - r1) * (r0 - r2))
    l1 = (r0 * r2) / ((r1 - r0) * (r1 - r2))
    l2 = (r0 * r1) / ((r2 - r0) * (r2 - r1))
    e = np.array([1.0 - l0, -l1, -l2])
    k[:3, :3] += np.pi * np.outer(e, e)
    return k.tocsc()


class _Workspace:
    """Precomputed operators for one (grid, params, objective) combination.

    ``kappa`` scales the quartic self terms and ``beta_eff`` the coupling
    in D = kappa B + 2 beta_eff C; the coupled problem uses (1, beta) and
    the pure-coupling limit problem (0, 1).  Inactive slots stay frozen
    at zero (scalar subproblems).
    """

    def __init__(
        self,
        grid: Grid,
        params: Params,
        kappa: float,
        beta_eff: float,
        u_active: bool = True,
        v_active: bool = True,
    ):
        self.grid = grid
        self.params = params
        self.kappa = kappa
        self.beta_eff = beta_eff
        self.u_active = u_active
        self.v_active = v_active
        self.point = params.interaction == "point"
        self.w = grid.weights
        self.lam = params.omega  # canonical internal decomposition parameter
        self.g = mdl._green_samples(grid, self.lam) if self.point else None
        self.atheta = params.alpha + theta(self.lam) if self.point else 0.0
        k = _stiffness(grid)
        m = sp.diags(self.w)
        self.h_phi = (k + params.omega * m).tocsc()
        self.h_v = (k + params.omega_tilde * m).tocsc()
        self._phi_solve = spla.factorized(self.h_phi) if u_active else None
        self._v_solve = spla.factorized(self.h_v) if v_active else None

    # -- objective pieces ------------------------------------------------

    def quad(self, phi, q, v):
        a = float(phi @ self.h_phi.dot(phi)) + float(v @ self.h_v.dot(v))
        if self.point:
            a += self.atheta * q * q
        return a

    def quartic(self, phi, q, v):
        u = phi + q * self.g if self.point and q != 0.0 else phi
        b = float(self.w @ (u**4) + self.w @ (v**4))
        c = float(self.w @ (u * u * v * v))
        return b, c, u

    def qvalue(self, phi, q, v):
        a = self.quad(phi, q, v)
        b, c, _ = self.quartic(phi, q, v)
        d = self.kappa * b + 2.0 * self.beta_eff * c
        if d <= 0.0:
            return np.inf, a, d
        return a * a / (4.0 * d), a, d

    def qgrad(self, phi, q, v):
        """Euclidean gradient of Q plus the values (Q, A, D)."""
        a = self.quad(phi, q, v)
        b, c, u = self.quartic(phi, q, v)
        d = self.kappa * b + 2.0 * self.beta_eff * c
        if d <= 0.0:
            raise DegenerateRayError("kappa B + 2 beta C vanishes along this ray")
        qv = a * a / (4.0 * d)
        ca = a / (2.0 * d)
        cd = a * a / (4.0 * d * d)
        wu3 = self.w * u**3
        wuv2 = self.w * u * v * v
        gphi = np.zeros_like(phi)
        gq = 0.0
        gv = np.zeros_like(v)
        if self.u_active:
            gd_phi = 4.0 * self.kappa * wu3 + 4.0 * self.beta_eff * wuv2
            gphi = ca * 2.0 * self.h_phi.dot(phi) - cd * gd_phi
            if self.point:
                gd_q = float(
                    4.0 * self.kappa * (wu3 @ self.g)
                    + 4.0 * self.beta_eff * (wuv2 @ self.g)
                )
                gq = ca * 2.0 * self.atheta * q - cd * gd_q
        if self.v_active:
            gd_v = 4.0 * self.kappa * self.w * v**3 + 4.0 * self.beta_eff * self.w * u * u * v
            gv = ca * 2.0 * self.h_v.dot(v) - cd * gd_v
        return qv, a, gphi, gq, gv

    def precondition(self, gphi, gq, gv):
        dphi = self._phi_solve(gphi) if self.u_active else np.zeros_like(gphi)
        dq = gq / (2.0 * self.atheta) if (self.u_active and self.point) else 0.0
        dv = self._v_solve(gv) if self.v_active else np.zeros_like(gv)
        return dphi, dq, dv

    def riesz_norm(self, gphi, gq, gv):
        """Norm of the gradient in the quadrature inner product."""
        return float(np.sqrt(np.sum(gphi * gphi / self.w) + gq * gq + np.sum(gv * gv / self.w)))


def _descend(ws: _Workspace, phi, q, v, options: SolveOptions):
    """Preconditioned projected descent on Q; returns the final iterate.

    Settles onto the right branch of the landscape; the remaining
    stationarity residual is removed afterwards by _polish.
    """
    # normalize to A = 1 (Q is scale invariant)
    a0 = ws.quad(phi, q, v)
    if a0 <= 0.0:
        raise DegenerateRayError("zero seed")
    s = 1.0 / np.sqrt(a0)
    phi, q, v = phi * s, q * s, v * s
    qv, a, _ = ws.qvalue(phi, q, v)
    step = options.step_init
    grad_norm = np.inf
    clipped = False
    converged = False
    stall = 0
    for _ in range(options.max_iters):
        qv, a, gphi, gq, gv = ws.qgrad(phi, q, v)
        grad_norm = ws.riesz_norm(gphi, gq, gv)
        # the quotient (and the rounding floor of its gradient) scales with
        # the frequency, so the tolerance is relative to max(A, |Q|)
        if grad_norm <= options.grad_tol * max(a, abs(qv)):
            converged = True
            break
        dphi, dq, dv = ws.precondition(gphi, gq, gv)
        slope = float(gphi @ dphi + gq * dq + gv @ dv)
        accepted = False
        while step > 1e-16:
            phi_n = np.maximum(phi - step * dphi, 0.0)
            v_n = np.maximum(v - step * dv, 0.0)
            q_n = max(q - step * dq, 0.0)
            qv_n, a_n, _ = ws.qvalue(phi_n, q_n, v_n)
            if qv_n <= qv - options.armijo * step * slope:
                clipped = bool(
                    np.any((phi_n == 0.0) & (phi - step * dphi < 0.0))
                    or np.any((v_n == 0.0) & (v - step * dv < 0.0))
                    or (q_n == 0.0 and q - step * dq < 0.0)
                )
                sc = 1.0 / np.sqrt(a_n)
                phi, q, v = phi_n * sc, q_n * sc, v_n * sc
                stall = stall + 1 if qv - qv_n <= 1e-14 * abs(qv) else 0
                qv = qv_n
                accepted = True
                break
            step *= options.shrink
        if not accepted or stall >= 20:
            break
        step = min(step / options.shrink, 1e3)
    return phi, q, v, qv, grad_norm, clipped, converged


def _polish(ws: _Workspace, phi, q, v, options: SolveOptions, max_polish: int = 2000):
    """Damped Picard iteration on the stationarity equations of Q.

    At lambda = omega the gradient vanishes iff
        H_phi phi = (A/D) (kappa w u^3 + beta w u v^2),
        atheta q  = (A/D) (kappa <w u^3, g> + beta <w u v^2, g>),
        H_v v     = (A/D) (kappa w v^3 + beta w u^2 v),
    so one sweep is a preconditioned fixed-point update.  Unlike the
    Armijo search, it is not limited by rounding of Q and drives the
    strong-form residual to near machine precision.  Zero components
    stay zero, so the branch found by descent is preserved.
    """
    qv, a, gphi, gq, gv = ws.qgrad(phi, q, v)
    gn = ws.riesz_norm(gphi, gq, gv)
    best = (phi, q, v, gn)
    tau = 1.0
    no_progress = 0
    for _ in range(max_polish):
        if gn <= options.grad_tol * max(a, abs(qv)) or no_progress >= 40:
            break
        b, c, u = ws.quartic(phi, q, v)
        d = ws.kappa * b + 2.0 * ws.beta_eff * c
        scale = a / d
        wu = ws.kappa * ws.w * u**3 + ws.beta_eff * ws.w * u * v * v
        wv = ws.kappa * ws.w * v**3 + ws.beta_eff * ws.w * u * u * v
        phi_p = ws._phi_solve(scale * wu) if ws.u_active else phi
        q_p = scale * float(wu @ ws.g) / ws.atheta if (ws.u_active and ws.point) else q
        v_p = ws._v_solve(scale * wv) if ws.v_active else v
        phi_n = (1.0 - tau) * phi + tau * phi_p
        q_n = (1.0 - tau) * q + tau * q_p
        v_n = (1.0 - tau) * v + tau * v_p
        a_n = ws.quad(phi_n, q_n, v_n)
        if a_n <= 0.0:
            break
        sc = 1.0 / np.sqrt(a_n)
        phi_n, q_n, v_n = phi_n * sc, q_n * sc, v_n * sc
        qv_n, a_n, gphi_n, gq_n, gv_n = ws.qgrad(phi_n, q_n, v_n)
        gn_n = ws.riesz_norm(gphi_n, gq_n, gv_n)
        if gn_n < gn:
            phi, q, v, qv, a, gn = phi_n, q_n, v_n, qv_n, a_n, gn_n
            if gn < 0.98 * best[3]:
                best = (phi, q, v, gn)
                no_progress = 0
            else:
                no_progress += 1
            tau = min(1.0, 1.5 * tau)
        else:
            tau *= 0.5
            no_progress += 1
            phi, q, v, gn = best[0], best[1], best[2], best[3]
            if tau < 1e-4:
                break
    phi, q, v, gn = best
    qv, a, gphi, gq, gv = ws.qgrad(phi, q, v)
    return phi, q, v, gn, gn <= options.grad_tol * max(a, abs(qv))


def _newton_polish(ws: _Workspace, phi, q, v, options: SolveOptions):
    """Newton--Krylov fallback for near-degenerate stationary points.

    Close to a branch crossing the Picard map of _polish has a contraction
    factor near one and stalls.  Solving x = M(x) with a Krylov Newton
    method removes the slow mode; the iterate is renormalized to A = 1 and
    clipped back onto the nonnegative cone afterwards.
    """
    n = ws.grid.nodes.size

    def normalize(phi, q, v):
        a = ws.quad(phi, q, v)
        if a <= 0.0:
            raise DegenerateRayError("zero iterate in newton polish")
        s = 1.0 / np.sqrt(a)
        return phi * s, q * s, v * s

    def picard(phi, q, v):
        b, c, u = ws.quartic(phi, q, v)
        scale = 1.0 / (ws.kappa * b + 2.0 * ws.beta_eff * c)  # A = 1
        wu = ws.kappa * ws.w * u**3 + ws.beta_eff * ws.w * u * v * v
        wv = ws.kappa * ws.w * v**3 + ws.beta_eff * ws.w * u * u * v
        phi_p = ws._phi_solve(scale * wu) if ws.u_active else phi
        q_p = scale * float(wu @ ws.g) / ws.atheta if (ws.u_active and ws.point) else q
        v_p = ws._v_solve(scale * wv) if ws.v_active else v
        return phi_p, q_p, v_p

    def residual(x):
        phi, q, v = normalize(x[:n], float(x[n]), x[n + 1 :])
        phi_p, q_p, v_p = picard(phi, q, v)
        return np.concatenate([phi - phi_p, [q - q_p], v - v_p])

    best = (phi, q, v)
    qv, a, gphi, gq, gv = ws.qgrad(phi, q, v)
    gn = ws.riesz_norm(gphi, gq, gv)
    for _ in range(3):
        if gn <= options.grad_tol * max(a, abs(qv)):
            break
        x0 = np.concatenate([best[0], [best[1]], best[2]])
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                xs = scipy.optimize.newton_krylov(residual, x0, f_tol=1e-12, maxiter=50)
        except Exception:  # noqa: BLE001 - no convergence; keep the best iterate
            break
        phi_n, q_n, v_n = normalize(
            np.maximum(xs[:n], 0.0), max(float(xs[n]), 0.0), np.maximum(xs[n + 1 :], 0.0)
        )
        qv_n, a_n, gphi_n, gq_n, gv_n = ws.qgrad(phi_n, q_n, v_n)
        gn_n = ws.riesz_norm(gphi_n, gq_n, gv_n)
        if not np.isfinite(gn_n) or gn_n >= gn:
            break
        best, gn, a, qv = (phi_n, q_n, v_n), gn_n, a_n, qv_n
    phi, q, v = best
    return phi, q, v, gn, gn <= options.grad_tol * max(a, abs(qv))


def _seed_states(ws: _Workspace, rng: np.random.Generator):
    """Multi-start seeds: coupled gaussian, scalar-u, and scalar-v."""
    r = ws.grid.nodes
    gau_u = np.exp(-0.25 * ws.params.omega * r * r)
    gau_v = np.exp(-0.25 * ws.params.omega_tilde * r * r)
    eps = 1e-3
    bump = lambda: 1.0 + 0.01 * rng.standard_normal()
    seeds = []
    if ws.u_active and ws.v_active:
        q0 = 0.3 if ws.point else 0.0
        seeds.append((gau_u * bump(), q0, gau_v * bump()))
        seeds.append((gau_u * bump(), q0, eps * gau_v))
        seeds.append((eps * gau_u, eps * q0, gau_v * bump()))
    elif ws.u_active:
        seeds.append((gau_u * bump(), 0.3 if ws.point else 0.0, np.zeros_like(r)))
    else:
        seeds.append((np.zeros_like(r), 0.0, gau_v * bump()))
    return seeds


def _finish(ws: _Workspace, phi, q, v, grad_norm, clipped) -> GroundState:
    limit = ws.kappa == 0.0
    u = Decomposition(Field(ws.grid, phi.copy()), float(q), ws.lam)
    state = CoupledState(u, Field(ws.grid, v.copy()), ws.params)
    state = mdl.nehari_project(state, limit=limit)
    report = mdl.limit_energy(state) if limit else mdl.energy(state)
    if ws.point:
        bres = abs(value_at_origin(state.u.phi) - ws.atheta * state.u.q)
    else:
        bres = 0.0
    residuals = Residuals(
        grad_norm=grad_norm,
        boundary_residual=bres,
        nehari_residual=abs(report.G) / report.A if report.A > 0 else 0.0,
        clipped_at_convergence=clipped,
    )
    return GroundState(state=state, level=report.I, report=report, residuals=residuals)


def _minimize(ws: _Workspace, options: SolveOptions) -> GroundState:
    rng = np.random.default_rng(options.seed)
    converged: list[GroundState] = []
    stalled: list[GroundState] = []
    for _ in range(max(1, options.restarts)):
        for phi0, q0, v0 in _seed_states(ws, rng):
            try:
                phi, q, v, _, gn, clipped, ok = _descend(
                    ws, np.asarray(phi0, float), float(q0), np.asarray(v0, float), options
                )
                if not ok:
                    phi, q, v, gn, ok = _polish(ws, phi, q, v, options)
                if not ok:
                    phi, q, v, gn, ok = _newton_polish(ws, phi, q, v, options)
            except DegenerateRayError:
                continue
            gs = _finish(ws, phi, q, v, gn, clipped)
            (converged if ok else stalled).append(gs)
    if converged:
        return min(converged, key=lambda gs: gs.level)
    if stalled:
        best = min(stalled, key=lambda gs: gs.level)
        raise ConvergenceError(
            f"gradient residual {best.residuals.grad_norm:.3e} above tolerance", best
        )
    raise ConvergenceError("all seeds produced degenerate rays")


def minimize_coupled(
    params: Params, options: SolveOptions | None = None, grid: Grid | None = None
) -> GroundState:
    """Ground state of the coupled system; level approximates c_beta
    (or the interaction-free c0_beta when params.interaction == 'none')."""
    options = options or SolveOptions()
    grid = grid or default_grid(params)
    ws = _Workspace(grid, params, kappa=1.0, beta_eff=params.beta)
    return _minimize(ws, options)


def minimize_scalar_point(
    omega: float,
    alpha: float,
    options: SolveOptions | None = None,
    grid: Grid | None = None,
) -> GroundState:
    """Scalar point-interaction ground state; level approximates d(omega)."""
    options = options or SolveOptions()
    params = Params(alpha=alpha, omega=omega, omega_tilde=omega, beta=0.0)
    grid = grid or default_grid(params)
    ws = _Workspace(grid, params, kappa=1.0, beta_eff=0.0, v_active=False)
    return _minimize(ws, options)


def minimize_scalar_regular(
    omega_tilde: float,
    options: SolveOptions | None = None,
    grid: Grid | None = None,
) -> GroundState:
    """Scalar free ground state; level approximates d0(omega_tilde)."""
    options = options or SolveOptions()
    params = Params(
        alpha=0.0, omega=omega_tilde, omega_tilde=omega_tilde, beta=0.0, interaction="none"
    )
    grid = grid or default_grid(params)
    ws = _Workspace(grid, params, kappa=1.0, beta_eff=0.0, u_active=False)
    return _minimize(ws, options)


def minimize_limit(
    params: Params, options: SolveOptions | None = None, grid: Grid | None = None
) -> GroundState:
    """Ground state of the pure-coupling limit problem; level approximates
    the beta -> infinity constant governing c_beta ~ level / beta."""
    options = options or SolveOptions()
    grid = grid or default_grid(params)
    ws = _Workspace(grid, params, kappa=0.0, beta_eff=1.0)
    return _minimize(ws, options)


def quotient_gradient(
    state: CoupledState, beta: float | None = None
) -> tuple[Field, float, Field]:
    """Gradient of the Nehari quotient in the quadrature inner product.

    Returns (dphi, dq, dv) such that the directional derivative along
    (delta_phi, delta_q, delta_v) is integrate(dphi * delta_phi) +
    dq * delta_q + integrate(dv * delta_v).  The state is re-expressed
    with decomposition parameter lambda = omega first.
    """
    params = state.params
    if beta is not None:
        params = Params(
            alpha=params.alpha,
            omega=params.omega,
            omega_tilde=params.omega_tilde,
            beta=beta,
            interaction=params.interaction,
        )
    u = state.u
    if params.interaction == "point" and u.lam != params.omega:
        u = mdl.convert_lambda(u, params.omega, params)
    ws = _Workspace(state.v.grid, params, kappa=1.0, beta_eff=params.beta)
    _, _, gphi, gq, gv = ws.qgrad(u.phi.values, u.q, state.v.values)
    w = ws.w
    return Field(ws.grid, gphi / w), float(gq), Field(ws.grid, gv / w)
