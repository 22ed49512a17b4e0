import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from margulis_lab import liealg, lorentz
from margulis_lab.errors import NotHyperbolic
from margulis_lab.suites import random_sl2_hyperbolic

traceless = arrays(np.float64, 3, elements=st.floats(-3, 3, allow_subnormal=False)).map(liealg.psi_inv)


def test_psi_basis():
    np.testing.assert_allclose(liealg.psi(liealg.E1), [1, 0, 0])
    np.testing.assert_allclose(liealg.psi(liealg.E2), [0, 1, 0])
    np.testing.assert_allclose(liealg.psi(liealg.E3), [0, 0, 1])
    assert liealg.killing(liealg.E3, liealg.E3) == -1.0


@settings(max_examples=300, deadline=None)
@given(traceless, traceless)
def test_psi_is_isometry(x, y):
    assert abs(lorentz.inner(liealg.psi(x), liealg.psi(y)) - liealg.killing(x, y)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(traceless)
def test_psi_roundtrip(x):
    np.testing.assert_allclose(liealg.psi_inv(liealg.psi(x)), x, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(traceless)
def test_expm_closed_form(x):
    from scipy.linalg import expm

    np.testing.assert_allclose(liealg.expm_sl2(x), expm(x), rtol=1e-10, atol=1e-10)


def test_adjoint_example():
    g = liealg.adjoint(np.diag([np.exp(0.5), np.exp(-0.5)]))
    fr = lorentz.hyperbolic_frame(g)
    assert fr.lam == pytest.approx(np.exp(-1))
    np.testing.assert_allclose(fr.x_zero, [1, 0, 0], atol=1e-12)


def test_adjoint_homomorphism(rng):
    for _ in range(100):
        a, b = random_sl2_hyperbolic(rng), random_sl2_hyperbolic(rng)
        lhs = liealg.adjoint(a @ b)
        rhs = liealg.adjoint(a) @ liealg.adjoint(b)
        assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, np.abs(lhs).max())
        np.testing.assert_allclose(liealg.adjoint(-a), liealg.adjoint(a))
        assert lorentz.is_isometry(liealg.adjoint(a))


def test_lift_recipe(rng):
    for _ in range(100):
        a = random_sl2_hyperbolic(rng)
        g = liealg.adjoint(a)
        gt = liealg.lift(g)
        fr = lorentz.hyperbolic_frame(g)
        assert np.trace(gt) > 2
        np.testing.assert_allclose(gt, a * np.sign(np.trace(a)), atol=1e-9)
        np.testing.assert_allclose(liealg.adjoint(gt), g, atol=1e-8)
        np.testing.assert_allclose(gt, liealg.expm_sl2(0.5 * fr.length * liealg.psi_inv(fr.x_zero)), atol=1e-8)
        assert np.trace(gt) == pytest.approx(2 * np.cosh(fr.length / 2))
        assert liealg.translation_length(gt) == pytest.approx(fr.length)
        np.testing.assert_allclose(liealg.lift(lorentz.inverse(g)), liealg.inverse_sl2(gt), atol=1e-8)


def test_lift_rejects_elliptic():
    with pytest.raises(NotHyperbolic):
        liealg.lift(lorentz.rotation(0.3))


def test_translation_length():
    assert liealg.translation_length(np.diag([np.e, 1 / np.e])) == pytest.approx(2.0)
    g = np.array([[2.0, 1.0], [1.0, 1.0]])
    for n in (1, 2, 3):
        assert liealg.translation_length(np.linalg.matrix_power(g, n)) == pytest.approx(
            n * liealg.translation_length(g)
        )
    with pytest.raises(NotHyperbolic):
        liealg.translation_length(np.eye(2))


def test_frame_from_lift_matches_eigensolve(rng):
    for _ in range(200):
        a = random_sl2_hyperbolic(rng)
        f1 = lorentz.hyperbolic_frame(liealg.adjoint(a))
        f2 = liealg.frame_from_lift(a)
        for v1, v2 in [(f1.x_minus, f2.x_minus), (f1.x_plus, f2.x_plus), (f1.x_zero, f2.x_zero)]:
            np.testing.assert_allclose(v1, v2, atol=1e-9)
        assert f1.lam == pytest.approx(f2.lam)
        np.testing.assert_allclose(liealg.axis_vector(a), f1.x_zero, atol=1e-9)
