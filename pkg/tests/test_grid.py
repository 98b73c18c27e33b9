"""Radial grid: quadrature, Dirichlet energy, origin extrapolation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltanls.grid import (
    Field,
    GridError,
    default_r_max,
    dirichlet_energy,
    inner,
    integrate,
    make_grid,
    sample,
    tail_decayed,
    value_at_origin,
)


def test_weights_integrate_constants_exactly():
    g = make_grid(10.0, 512, 2.0)
    assert g.weights.sum() == pytest.approx(np.pi * 100.0, rel=1e-13)


def test_nodes_increasing_positive():
    g = make_grid(7.0, 256, 2.0)
    assert g.nodes[0] > 0.0
    assert np.all(np.diff(g.nodes) > 0.0)
    assert g.nodes[-1] == pytest.approx(7.0)


@given(
    st.floats(min_value=1.0, max_value=100.0),
    st.integers(min_value=16, max_value=2000),
    st.floats(min_value=1.0, max_value=3.0),
)
@settings(max_examples=30, deadline=None)
def test_grid_invariants(r_max, n, p):
    g = make_grid(r_max, n, p)
    assert np.all(g.weights > 0.0)
    assert np.all(np.diff(g.nodes) > 0.0)
    assert g.weights.sum() == pytest.approx(np.pi * r_max**2, rel=1e-12)


def test_make_grid_rejects_bad_inputs():
    with pytest.raises(GridError):
        make_grid(0.0, 128)
    with pytest.raises(GridError):
        make_grid(5.0, 8)
    with pytest.raises(GridError):
        make_grid(5.0, 128, 0.5)


def test_gaussian_mass():
    # 2 pi int_0^inf e^{-r^2} r dr = pi
    g = make_grid(12.0, 2048, 2.0)
    f = sample(g, lambda r: np.exp(-r * r))
    assert integrate(f) == pytest.approx(np.pi, rel=1e-8)


def test_gaussian_dirichlet_energy():
    # f = e^{-r^2/2}: int |grad f|^2 = 2 pi int r^2 e^{-r^2} r dr = pi
    g = make_grid(12.0, 4096, 2.0)
    f = sample(g, lambda r: np.exp(-0.5 * r * r))
    assert dirichlet_energy(f) == pytest.approx(np.pi, rel=1e-5)


def test_inner_is_bilinear(grid_small, rng):
    a = Field(grid_small, rng.standard_normal(grid_small.n))
    b = Field(grid_small, rng.standard_normal(grid_small.n))
    c = Field(grid_small, rng.standard_normal(grid_small.n))
    lhs = inner(Field(grid_small, 2.0 * a.values + b.values), c)
    rhs = 2.0 * inner(a, c) + inner(b, c)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_value_at_origin_quadratic_exact(grid_small):
    f = sample(grid_small, lambda r: 3.0 - 2.0 * r + 0.5 * r * r)
    assert value_at_origin(f) == pytest.approx(3.0, rel=1e-9)


def test_value_at_origin_smooth(grid_small):
    f = sample(grid_small, lambda r: np.cos(r))
    assert value_at_origin(f) == pytest.approx(1.0, abs=1e-8)


def test_tail_decayed(grid_small):
    decayed = sample(grid_small, lambda r: np.exp(-r * r))
    flat = sample(grid_small, lambda r: np.ones_like(r))
    assert tail_decayed(decayed)
    assert not tail_decayed(flat)


def test_default_r_max_scaling():
    assert default_r_max(1.0) == pytest.approx(40.0)
    assert default_r_max(4.0) == pytest.approx(20.0)


def test_field_default_is_zero(grid_small):
    f = Field(grid_small)
    assert np.all(f.values == 0.0)
    assert f.values.shape == (grid_small.n,)


def test_field_shape_mismatch(grid_small):
    with pytest.raises(GridError):
        Field(grid_small, np.zeros(3))


def test_sample_matches_function(grid_small):
    f = sample(grid_small, np.sqrt)
    assert np.allclose(f.values, np.sqrt(grid_small.nodes))
