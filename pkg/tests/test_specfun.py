"""Special functions: K0, theta, omega_alpha, Green's kernel."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltanls.specfun import EULER_GAMMA, bessel_k0, green_value, omega_alpha, theta

# reference values computed with mpmath at 30 digits
K0_TABLE = [
    (0.05, 3.1142340294719898),
    (0.1, 2.4270690247020166),
    (0.5, 0.92441907122766586),
    (1.0, 0.42102443824070833),
    (1.9, 0.12884597927604749),
    (2.0, 0.11389387274953344),
    (2.1, 0.10078374088996693),
    (2.5, 0.062347553200366186),
    (5.0, 0.0036910983340425943),
    (10.0, 1.7780062316167652e-5),
    (25.0, 3.4641615622131144e-12),
    (50.0, 3.4101677497894955e-23),
    (100.0, 4.656628229175902e-45),
    (300.0, 3.7236948548891433e-132),
    (600.0, 1.3558285309948524e-262),
]


@pytest.mark.parametrize("z,ref", K0_TABLE)
def test_k0_reference_values(z, ref):
    assert bessel_k0(z) == pytest.approx(ref, rel=5e-14)


def test_k0_array_matches_scalars():
    zs = np.array([row[0] for row in K0_TABLE])
    vals = bessel_k0(zs)
    assert vals.shape == zs.shape
    assert np.allclose(vals, [row[1] for row in K0_TABLE], rtol=5e-14, atol=0.0)


def test_k0_preserves_shape():
    z = np.linspace(0.1, 5.0, 12).reshape(3, 4)
    assert bessel_k0(z).shape == (3, 4)


def test_k0_underflow_cutoff():
    assert bessel_k0(701.0) == 0.0
    assert bessel_k0(1e6) == 0.0


def test_k0_seam_is_smooth():
    # the series/integral switchover at z = 2 leaves no jump: the second
    # difference across the seam is pure curvature, ~K0''(2) * eps^2
    eps = 1e-6
    second = bessel_k0(2.0 - eps) + bessel_k0(2.0 + eps) - 2.0 * bessel_k0(2.0)
    assert abs(second) < 1e-9


@given(st.floats(min_value=0.01, max_value=100.0))
@settings(max_examples=50, deadline=None)
def test_k0_positive(z):
    assert bessel_k0(z) > 0.0


@given(
    st.floats(min_value=0.01, max_value=100.0),
    st.floats(min_value=1.001, max_value=2.0),
)
@settings(max_examples=50, deadline=None)
def test_k0_decreasing(z, factor):
    assert bessel_k0(z * factor) < bessel_k0(z)


THETA_TABLE = [
    (1.0, -0.018451073777171806),
    (2.0, 0.036707826260991092),
    (4.0, 0.09186672629915399),
    (10.0, 0.16478282594268513),
]


@pytest.mark.parametrize("lam,ref", THETA_TABLE)
def test_theta_reference_values(lam, ref):
    assert theta(lam) == pytest.approx(ref, rel=1e-14, abs=1e-16)


def test_theta_log_increment():
    # theta(4 lam) - theta(lam) = log(2) / (2 pi)
    for lam in (0.5, 1.0, 3.0):
        assert theta(4.0 * lam) - theta(lam) == pytest.approx(
            np.log(2.0) / (2.0 * np.pi), rel=1e-12
        )


def test_omega_alpha_reference_values():
    assert omega_alpha(0.0) == pytest.approx(1.2609470067487736, rel=1e-15)
    assert omega_alpha(0.5) == pytest.approx(0.0023547463228219416, rel=1e-14)
    assert omega_alpha(-0.5) == pytest.approx(675.22660017289746, rel=1e-14)


@given(st.floats(min_value=-3.0, max_value=3.0))
@settings(max_examples=100, deadline=None)
def test_alpha_plus_theta_at_omega_alpha_vanishes(alpha):
    assert abs(alpha + theta(omega_alpha(alpha))) <= 1e-13


def test_euler_gamma():
    assert EULER_GAMMA == pytest.approx(0.57721566490153286061, rel=1e-16)


def test_green_value_is_scaled_k0():
    lam, r = 2.0, 1.3
    assert green_value(lam, r) == pytest.approx(
        bessel_k0(np.sqrt(lam) * r) / (2.0 * np.pi), rel=1e-15
    )


def test_green_value_array():
    r = np.linspace(0.1, 3.0, 7)
    vals = green_value(1.5, r)
    assert vals.shape == r.shape
    assert np.all(np.diff(vals) < 0.0)
