import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad_vec

from lieobs.groups import (E, IDENTITY, R2, R3, GroupClass, GroupKind, element, inverse,
                           lambda_basis, lambda_of, multiply, r3_lambda, r3_prime_lambda, rho,
                           theta)

from conftest import ALL_CLASSES

coord = st.floats(-3, 3, allow_nan=False)
point = st.tuples(coord, coord, coord).map(np.array)


def rho_series(cls, t, terms=60):
    m = mp.matrix(theta(cls).tolist()) * mp.mpf(t)
    out, term = mp.eye(2), mp.eye(2)
    for j in range(1, terms):
        term = term * m / j
        out += term
    return np.array(out.tolist(), dtype=float)


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.label)
@pytest.mark.parametrize("t", [-2.5, -0.3, 0.0, 0.7, 2.0])
def test_rho_matches_exponential_series(cls, t):
    assert np.abs(rho(cls, t) - rho_series(cls, t)).max() < 1e-12 * max(1.0, np.abs(rho(cls, t)).max())


@pytest.mark.parametrize("cls,t,expected", [
    (R3, 1.3, [[2.66929666761924422, 2.10078900028577327], [0.0, 2.66929666761924422]]),
    (E, 2.0, [[0.909297426825681695, -1.41614683654714239], [1.41614683654714239, 0.909297426825681695]]),
    (r3_prime_lambda(-0.5), -1.7, [[-1.33553611536611392, -1.96921867314957758],
                                  [1.96921867314957758, -1.33553611536611392]]),
    (r3_lambda(0.25), 2.2, [[8.02501349943412093, 0.0], [0.0, 2.93301207146958095]]),
])
def test_lambda_frozen_quadrature_values(cls, t, expected):
    # values from 30-digit mpmath quadrature of rho
    np.testing.assert_allclose(lambda_of(cls, t), expected, rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.label)
def test_lambda_is_integral_of_rho(cls):
    for t in (-1.9, -0.01, 0.4, 3.0):
        ref, _ = quad_vec(lambda s: rho(cls, s), 0.0, t, epsabs=1e-14, epsrel=1e-13)
        np.testing.assert_allclose(lambda_of(cls, t), ref, rtol=1e-11, atol=1e-13)


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.label)
def test_lambda_basis_reassembles_closed_form(cls):
    ts = np.linspace(-4, 4, 17)
    total = np.zeros((ts.size, 2, 2))
    for (rate, power, trig), mat in lambda_basis(cls).items():
        f = ts ** power * np.exp(rate * ts)
        f = f * {"": 1.0, "cos": np.cos(ts), "sin": np.sin(ts)}[trig]
        total += f[:, None, None] * mat
    np.testing.assert_allclose(total, lambda_of(cls, ts), atol=1e-12)


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.label)
def test_rho_is_one_parameter_group(cls):
    s, t = 0.8, -1.3
    np.testing.assert_allclose(rho(cls, s) @ rho(cls, t), rho(cls, s + t), atol=1e-13)


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.label)
@given(g=point, h=point, k=point)
def test_group_axioms(cls, g, h, k):
    lhs = multiply(cls, multiply(cls, g, h), k)
    rhs = multiply(cls, g, multiply(cls, h, k))
    assert np.abs(lhs - rhs).max() < 1e-9 * max(1.0, np.abs(lhs).max())
    np.testing.assert_allclose(multiply(cls, g, IDENTITY), g, atol=1e-15)
    np.testing.assert_allclose(multiply(cls, IDENTITY, g), g, atol=1e-15)
    assert np.abs(multiply(cls, g, inverse(cls, g))).max() < 1e-12 * max(1.0, np.abs(g).max() * 30)


def test_product_formula_r2():
    # (t, v)(s, w) = (t + s, v + rho_t w) with rho_t = diag(1, e^t)
    out = multiply(R2, element(1.0, 2.0, 3.0), element(-0.5, 4.0, 5.0))
    np.testing.assert_allclose(out, [0.5, 6.0, 3.0 + np.e * 5.0])


def test_vectorized_product_matches_loop(rng):
    g, h = rng.normal(size=(2, 7, 3))
    batch = multiply(R3, g, h)
    for i in range(7):
        np.testing.assert_array_equal(batch[i], multiply(R3, g[i], h[i]))


@pytest.mark.parametrize("kind,lam", [("R3Lambda", 0.0), ("R3Lambda", 1.5), ("R3Lambda", None),
                                      ("R3PrimeLambda", 0.0), ("R2", 0.5), ("E", 1.0)])
def test_invalid_parameters_rejected(kind, lam):
    with pytest.raises(ValueError):
        GroupClass.parse(kind, lam)


def test_labels_and_boundary_lambda():
    assert r3_lambda(1.0).label == "R3Lambda(1)"
    assert r3_lambda(-1.0).lam == -1.0
    assert GroupClass.parse("E").kind is GroupKind.E
