"""Phase analysis: classification, sweeps, thresholds."""

import numpy as np
import pytest
from dataclasses import replace

from deltanls.model import Params
from deltanls.phase import (
    BracketError,
    ClassTols,
    Classification,
    PhaseError,
    beta_star,
    classify,
    component_norms,
    sweep_beta,
)
from deltanls.solver import (
    Residuals,
    minimize_coupled,
    minimize_scalar_point,
    minimize_scalar_regular,
)


@pytest.fixture(scope="module")
def gs_point(grid_mid):
    return minimize_scalar_point(2.0, 0.0, grid=grid_mid)


@pytest.fixture(scope="module")
def gs_regular(grid_mid):
    return minimize_scalar_regular(1.0, grid=grid_mid)


def test_classification_label():
    c = Classification("vector", "singular", ClassTols())
    assert c.label == "vector singular"


def test_point_minimizer_is_scalar_u_singular(gs_point):
    assert classify(gs_point).label == "scalar-u singular"


def test_regular_minimizer_is_scalar_v_regular(gs_regular):
    assert classify(gs_regular).label == "scalar-v regular"


def test_classify_refuses_unconverged(gs_point):
    bad = replace(
        gs_point,
        residuals=Residuals(
            grad_norm=np.nan, boundary_residual=0.0, nehari_residual=0.0,
            clipped_at_convergence=False,
        ),
    )
    with pytest.raises(PhaseError):
        classify(bad)


def test_component_norms_split_the_energy(grid_mid):
    p = Params(alpha=0.0, omega=2.0, omega_tilde=1.0, beta=30.0)
    gs = minimize_coupled(p, grid=grid_mid)
    nu, nv = component_norms(gs.state)
    assert nu**2 + nv**2 == pytest.approx(gs.report.A, rel=1e-10)
    assert nu > 0 and nv > 0  # strongly coupled: genuinely vector


def test_strong_coupling_is_vector_singular(grid_mid):
    p = Params(alpha=0.0, omega=2.0, omega_tilde=1.0, beta=30.0)
    gs = minimize_coupled(p, grid=grid_mid)
    assert classify(gs).label == "vector singular"


@pytest.fixture(scope="module")
def rows(grid_mid):
    p = Params(alpha=0.0, omega=2.0, omega_tilde=1.0)
    return sweep_beta(p, [0.0, 1.0, 4.0], grid=grid_mid)


class TestSweep:
    def test_no_failures(self, rows):
        assert not any(r.failed for r in rows)

    def test_base_row_is_min_of_scalar_levels(self, rows, gs_point, gs_regular):
        c0 = min(gs_point.level, gs_regular.level)
        assert rows[0].c_beta == pytest.approx(c0, rel=1e-3)

    def test_monotone_nonincreasing(self, rows):
        levels = [r.c_beta for r in rows]
        assert all(a >= b - 1e-6 for a, b in zip(levels, levels[1:]))

    def test_level_ordering(self, rows):
        for r in rows:
            assert r.c_beta <= r.c0_beta + 1e-6 * max(1.0, abs(r.c0_beta))

    def test_beta_c_column(self, rows):
        for r in rows:
            assert r.beta_c == pytest.approx(r.beta * r.c_beta, rel=1e-12)

    def test_unsorted_betas_rejected(self, grid_mid):
        p = Params(alpha=0.0, omega=2.0, omega_tilde=1.0)
        with pytest.raises(PhaseError):
            sweep_beta(p, [1.0, 0.0], grid=grid_mid)


def test_regime_table_matches_predictions():
    from deltanls.phase import regime_table

    cells = regime_table(
        0.5, 2.0, omega_tilde_factors=(0.6, 1.6), beta_star_bracket=(0.0, 8.0), grid_n=512
    )
    assert len(cells) == 4
    assert not any(c.failed for c in cells)
    assert all(c.match for c in cells)
    observed = {(c.regime, c.observed) for c in cells}
    # both scalar branches below threshold, vector singular above
    assert ("below", "scalar-v regular") in observed
    assert ("below", "scalar-u singular") in observed
    assert all(c.observed == "vector singular" for c in cells if c.regime == "above")


class TestBisection:
    def test_bad_bracket_rejected(self, grid_mid):
        p = Params(alpha=0.0, omega=2.0, omega_tilde=1.0)
        with pytest.raises(BracketError):
            beta_star(p, (5.0, 1.0), 0.1, grid=grid_mid)

    def test_level_must_drop_at_upper_bracket(self, grid_mid):
        p = Params(alpha=0.0, omega=2.0, omega_tilde=1.0)
        with pytest.raises(BracketError):
            beta_star(p, (0.0, 1e-4), 1e-5, grid=grid_mid)

    def test_beta_star_positive(self):
        # d(omega) > d0(omega_tilde): the scalar-v branch persists below beta*
        from deltanls.grid import default_r_max, make_grid

        p = Params(alpha=0.5, omega=2.0, omega_tilde=0.5)
        g = make_grid(default_r_max(0.5), 1024, 2.0)
        bs = beta_star(p, (0.0, 6.0), 0.05, grid=g)
        assert bs > 0.05
        below = minimize_coupled(replace(p, beta=max(0.0, bs - 0.3)), grid=g)
        above = minimize_coupled(replace(p, beta=bs + 0.3), grid=g)
        assert classify(below).label == "scalar-v regular"
        assert classify(above).label == "vector singular"
