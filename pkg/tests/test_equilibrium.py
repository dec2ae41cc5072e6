import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from peskin import equilibrium as eq
from peskin.contour import MaterialCurve
from peskin.spectral import frac_laplacian, grid, hilbert

from conftest import trig_poly

coef = st.floats(-2.0, 2.0)


def test_basis_is_orthogonal():
    e = eq.basis(32)
    names = list(e)
    gram = np.array([[eq.inner(e[a], e[b]) for b in names] for a in names])
    np.testing.assert_allclose(gram, 2 * np.pi * np.eye(4), atol=1e-13)


@given(a=coef, b=coef, c1=coef, c2=coef)
@settings(max_examples=30, deadline=None)
def test_projection_recovers_circle_coefficients(a, b, c1, c2):
    z = eq.CircleState(a, b, c1, c2)
    x = z.render(32)
    np.testing.assert_allclose(eq.projection_coefficients(x), z.coefficients(), atol=1e-13)
    np.testing.assert_allclose(eq.project_Pi(x), 0.0, atol=1e-13)
    fitted, residual = eq.fit_circle(x)
    assert residual < 1e-13
    assert fitted.radius == pytest.approx(z.radius, abs=1e-13)


def test_projections_are_complementary_idempotents(rng):
    w = trig_poly(rng, 32, 8, ncomp=2)
    p = eq.project_P(w)
    np.testing.assert_allclose(eq.project_P(p), p, atol=1e-13)
    np.testing.assert_allclose(p + eq.project_Pi(w), w, atol=1e-13)
    assert abs(eq.inner(p, eq.project_Pi(w))) < 1e-12


def test_circle_state_properties():
    z = eq.CircleState(0.6, 0.8, 1.0, -2.0)
    assert z.radius == pytest.approx(1.0)
    assert z.center == (1.0, -2.0)
    assert z.is_equilibrium
    assert not eq.CircleState(0.0).is_equilibrium
    assert isinstance(z.render(16), MaterialCurve)


@pytest.mark.parametrize("name", ["r", "t", "x", "y"])
def test_linearized_operator_kills_basis(name):
    assert np.abs(eq.linearized_L(eq.basis(64)[name])).max() < 1e-13


def test_linearized_operator_formula(rng):
    w = trig_poly(rng, 64, 10, ncomp=2)
    lw = eq.linearized_L(w)
    np.testing.assert_allclose(lw[0], 0.25 * (frac_laplacian(w[0], 1) + hilbert(w[1])), atol=1e-13)
    np.testing.assert_allclose(lw[1], 0.25 * (frac_laplacian(w[1], 1) - hilbert(w[0])), atol=1e-13)


def test_linearized_operator_is_symmetric_nonnegative(rng):
    u = trig_poly(rng, 64, 10, ncomp=2)
    w = trig_poly(rng, 64, 10, ncomp=2)
    assert eq.inner(eq.linearized_L(u), w) == pytest.approx(eq.inner(u, eq.linearized_L(w)), abs=1e-12)
    assert eq.inner(eq.linearized_L(u), u) >= -1e-12


def test_linearized_operator_matches_derivative_of_velocity(rng):
    # L is the derivative of Lambda X / 4 - N(X) at the unit circle
    x0 = eq.basis(64)["r"]
    w = trig_poly(rng, 64, 6, ncomp=2)
    h = 1e-5
    from peskin.contour import nonlinear_N

    f = lambda x: 0.25 * frac_laplacian(x, 1.0) - nonlinear_N(x)  # noqa: E731
    fd = (f(x0 + h * w) - f(x0 - h * w)) / (2 * h)
    np.testing.assert_allclose(fd, eq.linearized_L(w), atol=1e-8)


def test_conjugation_identity(rng):
    w = trig_poly(rng, 64, 16, ncomp=2, decay=0.0)
    np.testing.assert_allclose(eq.conjugated_L(w), eq.linearized_L(w), atol=1e-12)


def test_range_of_L_is_orthogonal_to_circles(rng):
    w = trig_poly(rng, 64, 16, ncomp=2)
    assert np.abs(eq.project_P(eq.linearized_L(w))).max() < 1e-13


@given(a=st.floats(0.5, 2.0), b=coef, c1=coef, c2=coef)
@settings(max_examples=10, deadline=None)
def test_frak_N_vanishes_at_equilibria(a, b, c1, c2):
    assert np.abs(eq.frak_N(eq.CircleState(a, b, c1, c2).render(32))).max() < 1e-12


def test_frak_N_is_quadratic(rng):
    w = eq.CircleState(1.2, 0.3).render(32).values
    u = trig_poly(rng, 32, 5, ncomp=2)
    eps = np.logspace(-4, -2, 5)
    vals = [np.abs(eq.frak_N(w + e * u)).max() for e in eps]
    assert np.polyfit(np.log(eps), np.log(vals), 1)[0] == pytest.approx(2.0, abs=0.1)


def test_fit_circle_custom_norm():
    s = grid(32)
    x = eq.basis(32)["r"] + 0.1 * np.stack([np.cos(2 * s), np.sin(2 * s)])
    z, res = eq.fit_circle(x, norm=lambda r: float(np.sqrt(eq.inner(r, r))))
    assert z.A == pytest.approx(1.0)
    assert res == pytest.approx(0.1 * np.sqrt(2 * np.pi))
