import numpy as np
import pytest

from margulis_lab import DeformationParams, StepLeavesHyperbolicLocus, Word, margulis, phi
from margulis_lab.affine import affine_twist
from margulis_lab.deformation import (
    convergence_order,
    deformed_lift,
    length_derivative,
    twist_margulis,
    twist_pairing,
    verify_twist_formula,
)
from margulis_lab.fuchsian import f_word
from margulis_lab.suites import random_params, random_word


def test_deformation_is_a_homomorphism(hol3, rng):
    u = phi(hol3, random_params(rng, 3))
    v, w = Word([1, -2, 3]), Word([2, 2, -1])
    np.testing.assert_allclose(deformed_lift(hol3, u, v, 0.0), hol3.evaluate_lift(v))
    for t in (0.1, -0.3):
        np.testing.assert_allclose(
            deformed_lift(hol3, u, v * w, t), deformed_lift(hol3, u, v, t) @ deformed_lift(hol3, u, w, t), atol=1e-10
        )


def test_length_derivative_is_margulis(hol3, rng):
    for _ in range(20):
        u = phi(hol3, random_params(rng, 3))
        w = random_word(rng, 3, int(rng.integers(1, 6)))
        assert length_derivative(hol3, u, w) == pytest.approx(margulis(u, w), abs=1e-6)


def test_word_path_has_the_same_derivative(hol3, rng):
    u = phi(hol3, random_params(rng, 3))
    for w in (Word([1]), Word([1, 2]), Word([2, -3])):
        d = length_derivative(hol3, u, w, step=1e-4, richardson=True, path="word")
        assert d == pytest.approx(margulis(u, w), abs=1e-6)


def test_richardson_improves_long_words(holonomies, rng):
    hol = holonomies[5]
    u = phi(hol, random_params(rng, 5))
    w = Word([1, -4, 5, 2, -3])
    a = margulis(u, w)
    plain = abs(length_derivative(hol, u, w, step=1e-3) - a)
    extrapolated = abs(length_derivative(hol, u, w, step=1e-3, richardson=True) - a)
    assert extrapolated < plain


def test_convergence_order(hol3, rng):
    u = phi(hol3, random_params(rng, 3))
    assert convergence_order(hol3, u, Word([1, -2, 3])) >= 1.9
    # conjugates of generator powers: half length is affine in t
    assert convergence_order(hol3, u, Word([2, 1, 1, -2])) == np.inf


def test_step_leaving_hyperbolic_locus(hol3):
    u = phi(hol3, DeformationParams([1.0, 1.0, 1.0, 1.0], [0.5], [0.0]))
    # half length of g1 is 0.5 + t: the lift is parabolic at t = -0.5
    with pytest.raises(StepLeavesHyperbolicLocus):
        length_derivative(hol3, u, Word([1]), step=0.5)


def test_argument_errors(hol3):
    u = phi(hol3, DeformationParams.zeros(3))
    with pytest.raises(ValueError):
        length_derivative(hol3, u, Word([1]), step=0.0)
    with pytest.raises(ValueError):
        length_derivative(hol3, u, Word([1]), path="sideways")
    with pytest.raises(IndexError):
        twist_pairing(hol3, 2)


@pytest.mark.parametrize("b", [3, 4, 5])
def test_twist_pairing_splits_into_angles(holonomies, b):
    hol = holonomies[b]
    for l in range(1, b - 1):
        tp = twist_pairing(hol, l)
        assert tp.value == pytest.approx(tp.from_angles, abs=1e-9)
        assert 0 < tp.theta < np.pi and 0 < tp.theta_prime < np.pi
        assert twist_margulis(hol, l, f_word(l, b)) == pytest.approx(tp.value, abs=1e-9)


def test_twists_act_only_on_their_curve(holonomies):
    hol = holonomies[5]
    for k in range(1, 4):
        for l in range(1, 4):
            a = twist_margulis(hol, k, f_word(l, 5))
            if l != k:
                assert abs(a) <= 1e-9
    assert np.any(affine_twist(hol, 1).values != 0)


def test_verify_twist_formula(hol3, rng):
    for t in (-1.0, 0.0, 0.5):
        p = DeformationParams(rng.uniform(-1, 1, 4), rng.uniform(-1, 1, 1), [t])
        check = verify_twist_formula(hol3, p, 1)
        assert check.residual <= 1e-6
        assert check.margulis_residual <= 1e-8
