import numpy as np
import pytest
from hypothesis import given, strategies as st

from lieobs.flow import (ConjugationSpec, DstarKind, FieldSpec, SingularConjugator,
                         classify_dstar, conjugate_field, f_of, flow, flow_many,
                         is_derivation_compatible, vector_field_eval, zeros_of_field)
from lieobs.groups import E, R2, R3, lambda_of, r3_lambda, rho
from lieobs.sets import SetKind

from conftest import ALL_CLASSES

ROOT_EXP_LINEAR = 1.25643120862616967698   # e^t = 1 + 2t

entry = st.floats(-2, 2, allow_nan=False)
mat2 = st.lists(entry, min_size=4, max_size=4).map(lambda v: np.array(v).reshape(2, 2))
vec2 = st.lists(entry, min_size=2, max_size=2).map(np.array)
pt = st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3).map(np.array)


def rk4_batch(dstar, c, v0, s_end, h=1e-3):
    """v' = D v + c per instance (c = Lambda_t xi is constant because t is)."""
    v = v0.copy()
    n = int(round(abs(s_end) / h))
    h = np.sign(s_end) * abs(s_end) / n
    f = lambda v: np.einsum("nij,nj->ni", dstar, v) + c
    for _ in range(n):
        k1 = f(v)
        k2 = f(v + 0.5 * h * k1)
        k3 = f(v + 0.5 * h * k2)
        k4 = f(v + h * k3)
        v = v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return v


def test_jordan_flow_formula():
    lam = -0.4
    fld = FieldSpec([[lam, 1.0], [0.0, lam]], [0.0, 0.0])
    s = np.linspace(-2, 2, 9)
    x, y = 1.5, -0.5
    out = flow(R2, fld, s, [0.0, x, y])
    np.testing.assert_allclose(out[:, 1], np.exp(s * lam) * (x + s * y), rtol=1e-13)
    np.testing.assert_allclose(out[:, 2], np.exp(s * lam) * y, rtol=1e-13)


def test_diagonal_flow_formula():
    fld = FieldSpec(np.diag([0.3, -1.2]), [0.0, 0.0])
    s = np.linspace(-2, 2, 5)
    out = flow(R2, fld, s, [0.0, 1.0, 1.0])
    np.testing.assert_allclose(out, np.column_stack([0 * s, np.exp(0.3 * s), np.exp(-1.2 * s)]),
                               rtol=1e-14)


@pytest.mark.parametrize("cls", [R2, R3, r3_lambda(0.5), E], ids=lambda c: c.label)
@given(d=mat2, xi=vec2, g=pt, s=st.floats(-1.5, 1.5), r=st.floats(-1.5, 1.5))
def test_flow_is_one_parameter_group(cls, d, xi, g, s, r):
    fld = FieldSpec(d, xi)
    lhs = flow(cls, fld, s, flow(cls, fld, r, g))
    rhs = flow(cls, fld, s + r, g)
    assert np.abs(lhs - rhs).max() < 1e-10 * max(1.0, np.abs(rhs).max())


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.label)
def test_flow_derivative_is_vector_field(cls, rng):
    fld = FieldSpec(rng.normal(size=(2, 2)), rng.normal(size=2))
    g = rng.uniform(-1, 1, 3)
    h = 1e-5
    fd = (flow(cls, fld, h, g) - flow(cls, fld, -h, g)) / (2 * h)
    np.testing.assert_allclose(fd, vector_field_eval(cls, fld, g), atol=1e-8)


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.label)
def test_flow_against_rk4(cls, rng):
    n = 20
    d = rng.uniform(-1.5, 1.5, (n, 2, 2))
    xi = rng.uniform(-1, 1, (n, 2))
    g = rng.uniform(-1, 1, (n, 3))
    c = np.einsum("nij,nj->ni", lambda_of(cls, g[:, 0]), xi)
    for s_end in (-2.0, 2.0):
        ref = rk4_batch(d, c, g[:, 1:], s_end)
        for i in range(n):
            out = flow(cls, FieldSpec(d[i], xi[i]), s_end, g[i])
            assert np.abs(out[1:] - ref[i]).max() < 1e-6
            assert out[0] == g[i, 0]


def test_flow_many_matches_flow(rng):
    fld = FieldSpec(rng.normal(size=(2, 2)), rng.normal(size=2))
    pts = rng.normal(size=(4, 3))
    s = np.linspace(-1, 1, 3)
    many = flow_many(R3, fld, s, pts)
    for j, p in enumerate(pts):
        np.testing.assert_allclose(many[:, j], flow(R3, fld, s, p), atol=1e-14)


def test_f_of_is_integral_of_exponential():
    fld = FieldSpec([[0.2, -1.0], [0.7, -0.3]], [0, 0])
    from scipy.integrate import quad_vec
    from scipy.linalg import expm
    ref, _ = quad_vec(lambda u: expm(u * fld.dstar), 0.0, 1.4, epsabs=1e-14)
    np.testing.assert_allclose(f_of(fld, 1.4), ref, atol=1e-12)


# --- fixed points -------------------------------------------------------------

def printed_fixed_curve(dstar, xi, t):
    """(x0, y0) written out for D* = [[a, b], [c, d]] invertible on R2."""
    (a, b), (c, d) = dstar
    det = a * d - b * c
    x0 = (-t * xi[0] * d + np.expm1(t) * xi[1] * b) / det
    y0 = (-a * np.expm1(t) * xi[1] + t * xi[0] * c) / det
    return np.array([x0, y0])


@given(d=mat2, xi=vec2, t=st.floats(-3, 3))
def test_invertible_fixed_curve_matches_printed_formula(d, xi, t):
    if abs(np.linalg.det(d)) < 0.1:
        d = d + 5 * np.eye(2)   # spectral radius <= 4, so the shift is invertible
    fix = zeros_of_field(R2, FieldSpec(d, xi))
    assert fix.kind is SetKind.Curve
    ref = printed_fixed_curve(d, xi, t)
    assert np.abs(fix.particular(t) - ref).max() < 1e-12 * max(1.0, np.abs(ref).max())


@pytest.mark.parametrize("cls", ALL_CLASSES, ids=lambda c: c.label)
def test_fixed_points_are_zeros_and_invariant(cls, rng):
    for _ in range(10):
        d = rng.uniform(-2, 2, (2, 2))
        if rng.random() < 0.5:
            d[1] = d[0] * rng.uniform(-1, 1)     # singular D*
        fld = FieldSpec(d, rng.uniform(-1, 1, 2))
        fix = zeros_of_field(cls, fld, (-6.0, 6.0))
        for g in fix.sample(rng, 20, t_range=(-2, 2)):
            assert np.linalg.norm(vector_field_eval(cls, fld, g)) < 1e-9
            traj = flow(cls, fld, np.linspace(-2, 2, 9), g)
            assert np.abs(traj - g).max() < 1e-9


def test_singular_dstar_fixed_set_lives_over_roots():
    # rows (1, 2) and (2, 4): consistent iff (e^t - 1) - 2 t = 0
    fix = zeros_of_field(R2, FieldSpec([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0]))
    assert fix.kind is SetKind.Line and not fix.window_limited
    np.testing.assert_allclose(fix.t_values, [0.0, ROOT_EXP_LINEAR], atol=1e-12)


def test_fixed_set_lists_only_roots_inside_window():
    d, xi = [[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0]
    fix = zeros_of_field(R2, FieldSpec(d, xi), (-1.0, 1.0))
    assert fix.t_values == (0.0,) and fix.omitted == 1
    assert fix.kind is SetKind.Line and not fix.window_limited


def test_rotation_group_zero_field_is_window_limited():
    fix = zeros_of_field(E, FieldSpec(np.zeros((2, 2)), [1.0, 0.0]), (-7.0, 7.0))
    assert fix.kind is SetKind.Plane and fix.window_limited
    np.testing.assert_allclose(fix.t_values, [-2 * np.pi, 0.0, 2 * np.pi], atol=1e-6)


def test_homogeneous_field_fixed_set_is_kernel_of_dstar():
    fix = zeros_of_field(R3, FieldSpec([[0.0, 1.0], [0.0, 0.0]], [0.0, 0.0]))
    assert fix.kind is SetKind.Plane and fix.t_values is None
    assert fix.contains([1.3, 4.0, 0.0]) and not fix.contains([1.3, 4.0, 0.1])


# --- compatibility, canonical forms, conjugation -----------------------------

@pytest.mark.parametrize("cls,dstar,ok", [
    (R2, np.diag([1.0, 2.0]), True),
    (R2, [[0.0, -1.0], [1.0, 0.0]], False),
    (R3, [[0.5, 2.0], [0.0, 0.5]], True),
    (R3, np.diag([1.0, 2.0]), False),
    (E, [[0.3, -2.0], [2.0, 0.3]], True),
    (E, np.diag([1.0, 2.0]), False),
    (r3_lambda(0.5), np.diag([-1.0, 3.0]), True),
])
def test_derivation_compatibility(cls, dstar, ok):
    rep = is_derivation_compatible(cls, FieldSpec(dstar, [0.7, -0.2]))
    assert rep.compatible is ok
    assert (rep.automorphism_residual < 1e-9) is ok


@pytest.mark.parametrize("dstar,kind", [
    (np.diag([1.0, 2.0]), DstarKind.RealDiagonalizable),
    (0.7 * np.eye(2), DstarKind.RealDiagonalizable),
    ([[1.0, 1.0], [0.0, 1.0]], DstarKind.JordanBlock),
    ([[0.0, 0.0], [1.0, 0.0]], DstarKind.JordanBlock),
    ([[0.0, -1.0], [1.0, 0.0]], DstarKind.ComplexPair),
])
def test_classify_dstar_kinds(dstar, kind):
    assert classify_dstar(FieldSpec(dstar, [0, 0])).kind is kind


@given(d=mat2)
def test_classify_dstar_reconstructs(d):
    c = classify_dstar(FieldSpec(d, [0, 0]))
    p = c.conjugator
    if abs(np.linalg.det(p)) > 1e-8:
        rebuilt = p @ c.canonical @ np.linalg.inv(p)
        assert np.abs(rebuilt - d).max() < 1e-6 * max(1.0, np.abs(d).max())


def test_conjugate_field_rejects_singular():
    with pytest.raises(SingularConjugator):
        conjugate_field(FieldSpec(np.eye(2), [1, 0]), ConjugationSpec([[1.0, 2.0], [2.0, 4.0]]))


def test_conjugation_intertwines_when_p_commutes_with_theta(rng):
    # on E every rotation-scaling matrix commutes with theta
    p = np.array([[1.3, -0.4], [0.4, 1.3]])
    fld = FieldSpec(rng.normal(size=(2, 2)), rng.normal(size=2))
    moved = conjugate_field(fld, ConjugationSpec(p))
    g = rng.normal(size=3)
    pi = lambda h: np.concatenate([h[:1], p @ h[1:]])
    for s in (-1.0, 0.5, 2.0):
        np.testing.assert_allclose(pi(flow(E, fld, s, g)), flow(E, moved, s, pi(g)), atol=1e-12)


def test_field_spec_validation():
    with pytest.raises(ValueError):
        FieldSpec([[np.nan, 0], [0, 0]], [0, 0])
    fld = FieldSpec([[1, 2], [3, 4]], [5, 6])
    with pytest.raises(ValueError):
        fld.dstar[0, 0] = 9.0
