"""Variational objects of the coupled system.

A state is a pair (u, v) where v is an ordinary radial field and u is
decomposed as u = phi + q * G_lambda into a regular part and a charge-q
multiple of the Green's kernel.  The quadratic quantity A, quartic
quantities B and C, the action I, the Nehari constraint G, and the
reduced functional J are all evaluated here, along with the closed-form
projection onto the Nehari manifold.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Literal

import numpy as np

from . import grid as gridmod
from .grid import Field, Grid, dirichlet_energy, inner, integrate
from .specfun import green_value, omega_alpha, theta

FOUR_PI = 4.0 * np.pi


class DomainError(ValueError):
    """Parameter or decomposition outside its admissible range."""


class DegenerateRayError(ValueError):
    """State with vanishing quartic terms cannot be Nehari-projected."""


Interaction = Literal["point", "none"]


@dataclass(frozen=True)
class Params:
    """Problem parameters (alpha, omega, omega_tilde, beta, interaction)."""

    alpha: float
    omega: float
    omega_tilde: float
    beta: float = 0.0
    interaction: Interaction = "point"

    def __post_init__(self):
        if self.interaction not in ("point", "none"):
            raise DomainError("interaction must be 'point' or 'none'")
        if self.interaction == "point":
            floor = omega_alpha(self.alpha)
            if not self.omega > floor:
                raise DomainError(
                    f"omega={self.omega} must exceed omega_alpha(alpha)={floor:.7g}"
                )
        elif not self.omega > 0.0:
            raise DomainError("omega must be positive without the point interaction")
        if not self.omega_tilde > 0.0:
            raise DomainError("omega_tilde must be positive")
        if self.beta < 0.0:
            raise DomainError("beta must be nonnegative")

    @property
    def omega_floor(self) -> float:
        return omega_alpha(self.alpha) if self.interaction == "point" else 0.0


@dataclass
class Decomposition:
    """u = phi + q * G_lambda with charge q >= 0."""

    phi: Field
    q: float
    lam: float

    def copy(self) -> "Decomposition":
        return Decomposition(self.phi.copy(), self.q, self.lam)


@dataclass
class CoupledState:
    u: Decomposition
    v: Field
    params: Params

    def __post_init__(self):
        if self.params.interaction == "none" and self.u.q != 0.0:
            raise DomainError("charge must vanish without the point interaction")
        if self.params.interaction == "point":
            lam = self.u.lam
            if not (self.params.omega_floor < lam <= self.params.omega):
                raise DomainError(
                    f"lambda={lam} outside (omega_alpha, omega] = "
                    f"({self.params.omega_floor:.7g}, {self.params.omega}]"
                )

    def copy(self) -> "CoupledState":
        return CoupledState(self.u.copy(), self.v.copy(), self.params)

    def scaled(self, s: float) -> "CoupledState":
        out = self.copy()
        out.u.phi.values *= s
        out.u.q *= s
        out.v.values *= s
        return out


@dataclass(frozen=True)
class EnergyReport:
    """Scalars of the ray analysis: I(t u, t v) = A t^2 / 2 - (B + 2 beta C) t^4 / 4."""

    A: float
    B: float
    C: float
    I: float
    G: float
    J: float
    t0: float


@lru_cache(maxsize=128)
def _green_samples(grid: Grid, lam: float) -> np.ndarray:
    g = green_value(lam, grid.nodes)
    g.flags.writeable = False
    return g


def green_field(grid: Grid, lam: float) -> Field:
    """G_lambda sampled on the grid (cached per grid/lambda)."""
    return Field(grid, _green_samples(grid, lam).copy())


def u_values(d: Decomposition) -> np.ndarray:
    """Pointwise reconstruction u(r_i) = phi(r_i) + q * G_lambda(r_i)."""
    if d.q == 0.0:
        return d.phi.values.copy()
    return d.phi.values + d.q * _green_samples(d.phi.grid, d.lam)


def quadratic_form(state: CoupledState) -> float:
    """The quantity A = <(-Delta_alpha + omega)u, u> + |grad v|^2 + omega_tilde |v|^2.

    The singular L^2 mass uses the analytic value |G_lambda|_2^2 =
    1/(4 pi lambda); only the cross term <phi, G_lambda> is quadrature.
    """
    p = state.params
    phi, q, lam = state.u.phi, state.u.q, state.u.lam
    a = dirichlet_energy(state.v) + p.omega_tilde * inner(state.v, state.v)
    if p.interaction == "none":
        return a + dirichlet_energy(phi) + p.omega * inner(phi, phi)
    if not (p.omega_floor < lam <= p.omega):
        raise DomainError("lambda outside (omega_alpha, omega]")
    phi_mass = inner(phi, phi)
    a += dirichlet_energy(phi) + lam * phi_mass
    a += (p.alpha + theta(lam)) * q * q
    if p.omega != lam:
        g = green_field(phi.grid, lam)
        u_mass = phi_mass + 2.0 * q * inner(phi, g) + q * q / (FOUR_PI * lam)
        a += (p.omega - lam) * u_mass
    return a


def quartic_terms(state: CoupledState) -> tuple[float, float]:
    """B = |u|_4^4 + |v|_4^4 and the coupling C = int |u v|^2."""
    u = u_values(state.u)
    v = state.v.values
    w = state.v.grid.weights
    b = float(w @ (u**4) + w @ (v**4))
    c = float(w @ (u * u * v * v))
    return b, c


def energy(state: CoupledState) -> EnergyReport:
    """Full report of A, B, C and the derived I, G, J, t0."""
    a = quadratic_form(state)
    b, c = quartic_terms(state)
    beta = state.params.beta
    quart = b + 2.0 * beta * c
    return EnergyReport(
        A=a,
        B=b,
        C=c,
        I=0.5 * a - 0.25 * b - 0.5 * beta * c,
        G=a - quart,
        J=0.25 * a,
        t0=float(np.sqrt(a / quart)) if quart > 0.0 else np.inf,
    )


def nehari_quotient(state: CoupledState, beta: float | None = None) -> float:
    """Max of I along the ray through the state: A^2 / (4 (B + 2 beta C)).

    Scale invariant; its infimum over nonzero states is the ground-state
    level c_beta.
    """
    if beta is None:
        beta = state.params.beta
    a = quadratic_form(state)
    b, c = quartic_terms(state)
    quart = b + 2.0 * beta * c
    if quart <= 0.0:
        raise DegenerateRayError("B + 2 beta C vanishes; ray never meets the manifold")
    return a * a / (4.0 * quart)


def limit_quotient(state: CoupledState) -> float:
    """Ray maximum of the pure-coupling limit functional: A^2 / (8 C)."""
    a = quadratic_form(state)
    _, c = quartic_terms(state)
    if c <= 0.0:
        raise DegenerateRayError("coupling integral vanishes; limit ray is degenerate")
    return a * a / (8.0 * c)


def limit_energy(state: CoupledState) -> EnergyReport:
    """Report for the limit functional I~ = A/2 - C/2 (no quartic self terms)."""
    a = quadratic_form(state)
    _, c = quartic_terms(state)
    return EnergyReport(
        A=a,
        B=0.0,
        C=c,
        I=0.5 * a - 0.5 * c,
        G=a - 2.0 * c,
        J=0.25 * a,
        t0=float(np.sqrt(a / (2.0 * c))) if c > 0.0 else np.inf,
    )


def nehari_project(state: CoupledState, limit: bool = False) -> CoupledState:
    """Scale the state onto the Nehari manifold (G = 0)."""
    rep = limit_energy(state) if limit else energy(state)
    if not np.isfinite(rep.t0):
        raise DegenerateRayError("cannot project a degenerate ray")
    return state.scaled(rep.t0)


def convert_lambda(d: Decomposition, lambda_new: float, params: Params) -> Decomposition:
    """Re-express u = phi + q G_lam with a new decomposition parameter.

    The charge is unchanged and the pointwise reconstruction of u is
    identical up to rounding; only the split between regular and
    singular parts moves.
    """
    if not (params.omega_floor < lambda_new <= params.omega):
        raise DomainError("lambda_new outside (omega_alpha, omega]")
    if lambda_new == d.lam:
        return d.copy()
    g_old = _green_samples(d.phi.grid, d.lam)
    g_new = _green_samples(d.phi.grid, lambda_new)
    phi_new = Field(d.phi.grid, d.phi.values + d.q * (g_old - g_new))
    return Decomposition(phi_new, d.q, lambda_new)


def scalar_action_point(u: Decomposition, params: Params) -> float:
    """S_omega(u): the action of the single point-interaction equation."""
    state = CoupledState(u, Field(u.phi.grid), params)
    rep = energy(state)
    return rep.I


def scalar_action_regular(v: Field, params: Params) -> float:
    """S0_{omega_tilde}(v): the action of the single free equation."""
    p = replace(params, interaction="none")
    zero_u = Decomposition(Field(v.grid), 0.0, p.omega)
    rep = energy(CoupledState(zero_u, v, p))
    return rep.I
