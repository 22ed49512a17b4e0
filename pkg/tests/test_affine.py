import numpy as np
import pytest
from oracles import dense_pants_solve, expand_h

from margulis_lab import Cocycle, DeformationParams, Word, lorentz, margulis, phi
from margulis_lab.affine import (
    affine_twist,
    base_cocycle,
    coboundary,
    cohomology_coordinates,
    fit_coboundary,
    gauge_coefficients,
    gram_matrix,
    invariant_axis,
    isomorphism_matrix,
    margulis_at,
    pants_frames,
    pants_system,
    pants_residual,
    solve_pants,
)
from margulis_lab.errors import SingularSystem
from margulis_lab.fuchsian import f_word, h_word
from margulis_lab.suites import random_params, random_word


def test_params_roundtrip():
    p = DeformationParams.from_vector(4, np.arange(9.0))
    assert p.dim == 9 and p.b == 4
    np.testing.assert_array_equal(p.as_vector(), np.arange(9.0))
    assert len(DeformationParams.basis(3)) == 6
    with pytest.raises(ValueError):
        DeformationParams([1.0] * 4, [0.0], [0.0, 1.0])


@pytest.mark.parametrize("b", [3, 4, 5])
def test_solve_pants_matches_dense_solve(holonomies, rng, b):
    hol = holonomies[b]
    for j in range(1, b):
        (w1, w2, w3), frames = pants_frames(hol, j)
        f1, f3 = hol.evaluate(w1), hol.evaluate(w3)
        for _ in range(5):
            knowns = rng.uniform(-1, 1, 6)
            co = solve_pants(frames, f1, *knowns)
            ref = dense_pants_solve(frames, f1, f3, knowns)
            np.testing.assert_allclose([co.c2_plus, co.c3_minus, co.c3_plus], ref[[5, 7, 8]], atol=1e-8)
            assert pants_residual(frames, f1, co) <= 1e-9


@pytest.mark.parametrize("b", [3, 4, 5])
def test_gram_determinant_negative(holonomies, b):
    hol = holonomies[b]
    for j in range(1, b):
        (w1, _, _), frames = pants_frames(hol, j)
        det_gram = np.linalg.det(gram_matrix(frames))
        assert det_gram < 0
        # the right-hand side of the assembled system carries the alphas through -K
        _, k = pants_system(frames, hol.evaluate(w1))
        det_alpha = np.linalg.det(-k[:, :3])
        assert det_alpha < 0
        assert det_alpha == pytest.approx(det_gram, rel=1e-9)


def test_degenerate_pants_is_singular(hol3):
    _, frames = pants_frames(hol3, 1)
    with pytest.raises(SingularSystem):
        solve_pants([frames[0]] * 3, np.eye(3), 1, 1, 1, 0, 0, 0)


def test_cocycle_condition(hol3, rng):
    u = phi(hol3, random_params(rng, 3))
    for _ in range(100):
        v, w = random_word(rng, 4, 5), random_word(rng, 4, 5)
        lhs = u(v * w)
        rhs = u(v) + hol3.evaluate(v) @ u(w)
        assert np.linalg.norm(lhs - rhs) <= 1e-8 * max(1.0, np.linalg.norm(lhs))


def test_relation_and_inverse_values(holonomies, rng):
    for hol in holonomies.values():
        u = phi(hol, random_params(rng, hol.b))
        assert np.linalg.norm(u(Word(range(1, hol.b + 2)))) <= 1e-9
        g = Word([2])
        np.testing.assert_allclose(u(g.inverse()), -hol.evaluate(g.inverse()) @ u(g), atol=1e-12)
        for j in range(1, hol.b - 1):
            np.testing.assert_allclose(u(h_word(j, hol.b)), expand_h(hol, u, j), atol=1e-9)


@pytest.mark.parametrize("b", [3, 4, 5])
def test_pinning(holonomies, rng, b):
    hol = holonomies[b]
    for _ in range(3):
        p = random_params(rng, b)
        u = phi(hol, p)
        for i in range(1, b + 2):
            assert margulis(u, Word.gen(i)) == pytest.approx(p.alpha[i - 1], abs=1e-8)
        for j in range(1, b - 1):
            assert margulis(u, h_word(j, b)) == pytest.approx(p.beta[j - 1], abs=1e-8)


def test_gauge_is_fixed(holonomies, rng):
    for hol in holonomies.values():
        p = random_params(rng, hol.b)
        u = base_cocycle(hol, p.alpha, p.beta)
        assert max(abs(v) for v in gauge_coefficients(u).values()) <= 1e-9


def test_coboundaries_have_zero_coordinates(holonomies, rng):
    for hol in holonomies.values():
        u = coboundary(hol, rng.uniform(-1, 1, 3))
        assert np.abs(cohomology_coordinates(u)).max() <= 1e-9
        v, res = fit_coboundary(u)
        assert res <= 1e-12


def test_fit_coboundary_detects_nontrivial_class(hol3):
    # a cocycle with a nonzero invariant cannot be a coboundary
    u = phi(hol3, DeformationParams.basis(3)[0])
    _, res = fit_coboundary(u)
    assert res > 1e-3


def test_twist_vanishes_on_generators_and_dividing_curves(holonomies):
    for hol in holonomies.values():
        b = hol.b
        for k in range(1, b - 1):
            at = affine_twist(hol, k)
            for i in range(1, b + 2):
                assert abs(margulis(at, Word.gen(i))) <= 1e-9
            for j in range(1, b - 1):
                assert abs(margulis(at, h_word(j, b))) <= 1e-9
            assert abs(margulis(at, f_word(k, b))) > 1e-3


def test_linearity(hol3, rng):
    u, v = phi(hol3, random_params(rng, 3)), phi(hol3, random_params(rng, 3))
    for _ in range(20):
        w = random_word(rng, 4, 6)
        lhs = margulis(u + 2.5 * v, w)
        assert lhs == pytest.approx(margulis(u, w) + 2.5 * margulis(v, w), abs=1e-9 * max(1, abs(lhs)))
    np.testing.assert_allclose((u - u).values, 0)
    np.testing.assert_allclose((-u).values, -u.values)


def test_inversion_and_conjugation_invariance(hol3, rng):
    u = phi(hol3, random_params(rng, 3))
    for _ in range(30):
        w, c = random_word(rng, 4, 4), random_word(rng, 4, 3)
        if not lorentz.is_hyperbolic(hol3.evaluate(w)):
            continue  # e.g. a rotation of the relation
        a = margulis(u, w)
        assert margulis(u, w.inverse()) == pytest.approx(a, abs=1e-9)
        assert margulis(u, c * w * c.inverse()) == pytest.approx(a, abs=1e-8)


def test_margulis_at_is_base_point_free(hol3, rng):
    u = phi(hol3, random_params(rng, 3))
    w = Word([1, -2, 3])
    g, uw = hol3.evaluate(w), u(w)
    a = margulis(u, w)
    for _ in range(10):
        assert margulis_at(g, uw, rng.uniform(-5, 5, 3)) == pytest.approx(a, abs=1e-9)
    ax = invariant_axis(g, uw)
    np.testing.assert_allclose(g @ ax.base_point + uw - ax.base_point, a * ax.direction, atol=1e-8)


def test_isomorphism_matrix_is_nonsingular(holonomies):
    for hol in holonomies.values():
        assert abs(np.linalg.det(isomorphism_matrix(hol))) > 1e-12


def test_cocycle_validation(hol3):
    with pytest.raises(ValueError):
        Cocycle(hol3, np.zeros((2, 3)))
    with pytest.raises(ValueError):
        phi(hol3, DeformationParams.zeros(4))
    assert np.all(Cocycle.zero(hol3).values == 0)
    assert lorentz.inner(Cocycle.zero(hol3)(Word([1, 2])), [1, 0, 0]) == 0
