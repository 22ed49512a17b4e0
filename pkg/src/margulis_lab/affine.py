"""Cocycles of ``G_b`` with values in R^{2,1} and the parametrization by D_b.

A cocycle satisfies ``u(gh) = u(g) + g u(h)`` and is stored by its values
on the free generators ``g_1 .. g_b``; the value on ``g_{b+1}`` follows
from the relation ``g_1 ... g_{b+1} = 1``.

Every hyperbolic value decomposes in the frame of its linear part as
``u(g) = alpha X^0 + c^- X^- + c^+ X^+`` where ``alpha = B(u(g), X^0)`` is
the Margulis invariant.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import liealg, lorentz
from .errors import NotHyperbolic, SingularSystem
from .fuchsian import Holonomy, f_word, h_word, pants_presentation
from .lorentz import HyperbolicFrame
from .words import Word

SOLVE_DET_TOL = 1e-12
ZERO_TOL = 1e-9
# below this rounding scale the direct Margulis evaluation is accurate to ~1e-13
DIRECT_SCALE = 1e3


class Cocycle:
    """Values of a cocycle on ``g_1 .. g_b`` over a fixed holonomy."""

    __slots__ = ("hol", "values")

    def __init__(self, hol: Holonomy, values):
        values = np.array(values, dtype=float)
        if values.shape != (hol.b, 3):
            raise ValueError(f"expected shape {(hol.b, 3)}, got {values.shape}")
        values.setflags(write=False)
        self.hol = hol
        self.values = values

    @classmethod
    def zero(cls, hol: Holonomy) -> "Cocycle":
        return cls(hol, np.zeros((hol.b, 3)))

    def generator_value(self, i: int) -> np.ndarray:
        """``u(g_i)`` for ``1 <= i <= b + 1``."""
        if 1 <= i <= self.hol.b:
            return self.values[i - 1]
        if i == self.hol.b + 1:
            return _last_value(self)
        raise IndexError(f"generator index {i} out of range")

    def all_generator_values(self) -> np.ndarray:
        return np.array([self.generator_value(i) for i in range(1, self.hol.b + 2)])

    def __call__(self, w: Word) -> np.ndarray:
        return evaluate_cocycle(self, w)

    def _check(self, other: "Cocycle") -> None:
        if other.hol is not self.hol:
            raise ValueError("cocycles live over different holonomies")

    def __add__(self, other: "Cocycle") -> "Cocycle":
        self._check(other)
        return Cocycle(self.hol, self.values + other.values)

    def __sub__(self, other: "Cocycle") -> "Cocycle":
        self._check(other)
        return Cocycle(self.hol, self.values - other.values)

    def __mul__(self, s: float) -> "Cocycle":
        return Cocycle(self.hol, float(s) * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "Cocycle":
        return Cocycle(self.hol, -self.values)

    def __repr__(self) -> str:
        return f"Cocycle(b={self.hol.b}, values={self.values.tolist()!r})"


@dataclass(frozen=True)
class DeformationParams:
    """A point ``(alpha, beta, t)`` of D_b.

    ``alpha``: Margulis invariants of the ``b+1`` boundary generators;
    ``beta``: Margulis invariants of the dividing curves ``h_j``;
    ``t``: affine twist parameters along the ``h_j``.
    """

    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    t: tuple[float, ...]

    def __post_init__(self):
        for name in ("alpha", "beta", "t"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        b = len(self.alpha) - 1
        if b < 3 or len(self.beta) != b - 2 or len(self.t) != b - 2:
            raise ValueError(
                f"need b+1 alphas and b-2 betas and twists with b >= 3; got "
                f"{len(self.alpha)}, {len(self.beta)}, {len(self.t)}"
            )

    @property
    def b(self) -> int:
        return len(self.alpha) - 1

    @property
    def dim(self) -> int:
        return 3 * self.b - 3

    def as_vector(self) -> np.ndarray:
        return np.array(self.alpha + self.beta + self.t)

    @classmethod
    def from_vector(cls, b: int, vec) -> "DeformationParams":
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (3 * b - 3,):
            raise ValueError(f"expected {3 * b - 3} entries, got shape {vec.shape}")
        return cls(vec[: b + 1], vec[b + 1 : 2 * b - 1], vec[2 * b - 1 :])

    @classmethod
    def zeros(cls, b: int) -> "DeformationParams":
        return cls.from_vector(b, np.zeros(3 * b - 3))

    @classmethod
    def basis(cls, b: int) -> list["DeformationParams"]:
        return [cls.from_vector(b, e) for e in np.eye(3 * b - 3)]


@dataclass(frozen=True)
class PantsCoefficients:
    """The nine frame coefficients of a cocycle on a pants ``(f1, f2, f3)``."""

    alpha1: float
    alpha2: float
    alpha3: float
    c1_minus: float
    c1_plus: float
    c2_minus: float
    c2_plus: float
    c3_minus: float
    c3_plus: float

    def values(self, frames: Sequence[HyperbolicFrame]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        f1, f2, f3 = frames
        return (
            f1.combine(self.alpha1, self.c1_minus, self.c1_plus),
            f2.combine(self.alpha2, self.c2_minus, self.c2_plus),
            f3.combine(self.alpha3, self.c3_minus, self.c3_plus),
        )


@dataclass(frozen=True)
class InvariantAxis:
    """Invariant line ``{base_point + s * direction}`` of a hyperbolic affine map."""

    base_point: np.ndarray
    direction: np.ndarray
    alpha: float


def evaluate_cocycle(u: Cocycle, w: Word) -> np.ndarray:
    """Expand ``u(x_1 ... x_n) = sum_k x_1 ... x_{k-1} u(x_k)`` with ``u(g^-1) = -g^-1 u(g)``.

    Prefixes are multiplied as 2x2 lifts and mapped through the adjoint,
    which loses much less precision than chaining 3x3 matrices.
    """
    hol = u.hol
    total = np.zeros(3)
    prefix = np.eye(2)
    for x in w:
        i = abs(x)
        val = u.generator_value(i)
        step = hol.lifts[i] if x > 0 else liealg.inverse_sl2(hol.lifts[i])
        if x < 0:
            val = -liealg.adjoint(step) @ val
        total = total + liealg.adjoint(prefix) @ val
        prefix = prefix @ step
    return total


def _last_value(u: Cocycle) -> np.ndarray:
    # u(g_{b+1}) from the relation, without recursing through evaluate_cocycle
    hol = u.hol
    total = np.zeros(3)
    prefix = np.eye(2)
    for i in range(1, hol.b + 1):
        total = total + liealg.adjoint(prefix) @ u.values[i - 1]
        prefix = prefix @ hol.lifts[i]
    return -liealg.adjoint(liealg.inverse_sl2(prefix)) @ total


def coboundary(hol: Holonomy, v) -> Cocycle:
    """``delta_v(g) = v - g v``: the cocycle of conjugating by translation by ``v``."""
    v = np.asarray(v, dtype=float)
    return Cocycle(hol, [v - hol.generators[i] @ v for i in range(1, hol.b + 1)])


def margulis(u: Cocycle, w: Word) -> float:
    """Margulis invariant ``B(u(w), X^0_w)`` (base point at the origin).

    See :func:`margulis_many` for how it is evaluated.
    """
    a = margulis_many(u, [w])[0]
    if np.isnan(a):
        raise NotHyperbolic(f"{w} does not map to a hyperbolic isometry")
    return float(a)


def _inner(x, y):
    return x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] - x[..., 2] * y[..., 2]


def margulis_many(u: Cocycle, words: Sequence[Word]) -> np.ndarray:
    """Margulis invariants of many words, ``nan`` where the image is not hyperbolic.

    The invariant is unchanged by conjugation and inversion, so each word
    is cyclically reduced and replaced by its inverse when that has fewer
    inverse letters.  Two evaluations are available:

    * direct: ``B(u(w), X^0_w)``.  ``u(w)`` grows like ``e^{L/2}`` on long
      words and cancels most of its digits against ``X^0_w``.
    * by rotations: pulling each term of ``u(w) = sum_k x_1 ... x_{k-1}
      u(x_k)`` back by its prefix gives ``sum_k B(u(x_k), X^0_{w_k})`` with
      ``w_k`` the rotation starting at ``x_k`` (``-B(u(g), X^0_{w_{k+1}})``
      for ``x_k = g^-1``).  These terms stay small unless a rotation's
      axis passes far from the origin.

    The direct value is kept when its rounding scale is below
    ``DIRECT_SCALE``; otherwise the one with the smaller scale wins.
    Words of equal length are evaluated together as stacks of 2x2 matrices.
    """
    hol = u.hol
    n_gen = hol.b + 1
    # letter x is stored at index x + n_gen
    lifts = np.zeros((2 * n_gen + 1, 2, 2))
    gen_vals = np.zeros((2 * n_gen + 1, 3))
    letter_vals = np.zeros((2 * n_gen + 1, 3))
    for i in range(1, n_gen + 1):
        val = u.generator_value(i)
        inv = liealg.inverse_sl2(hol.lifts[i])
        lifts[n_gen + i], lifts[n_gen - i] = hol.lifts[i], inv
        gen_vals[n_gen + i] = gen_vals[n_gen - i] = val
        letter_vals[n_gen + i], letter_vals[n_gen - i] = val, -liealg.adjoint(inv) @ val

    out = np.full(len(words), np.nan)
    groups: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for idx, w in enumerate(words):
        letters = w.cyclic_reduction().letters
        if 2 * sum(x < 0 for x in letters) > len(letters):
            letters = tuple(-x for x in reversed(letters))
        if letters:
            groups.setdefault(len(letters), []).append((idx, letters))

    for n, group in groups.items():
        idx = np.array([i for i, _ in group])
        letters = np.array([ls for _, ls in group])
        steps = lifts[letters + n_gen]
        # prefixes[:, k] = x_1 ... x_k
        prefixes = np.empty((len(group), n + 1, 2, 2))
        prefixes[:, 0] = np.eye(2)
        for k in range(n):
            prefixes[:, k + 1] = prefixes[:, k] @ steps[:, k]
        terms = np.einsum("nkij,nkj->nki", liealg.adjoint(prefixes[:, :n]), letter_vals[letters + n_gen])
        x0 = liealg.axis_vectors(prefixes[:, n])
        direct = _inner(terms.sum(axis=1), x0)
        scale = np.linalg.norm(terms, axis=-1).sum(axis=1) * np.linalg.norm(x0, axis=-1)
        out[idx] = direct

        redo = np.flatnonzero(scale > DIRECT_SCALE)
        if redo.size:
            ls, pre, st = letters[redo], prefixes[redo], steps[redo]
            # the rotation starting at x_k is (x_k ... x_n)(x_1 ... x_{k-1})
            axes = np.empty((len(redo), n, 3))
            suffix = np.broadcast_to(np.eye(2), (len(redo), 2, 2))
            for k in range(n - 1, -1, -1):
                suffix = st[:, k] @ suffix
                axes[:, k] = liealg.axis_vectors(suffix @ pre[:, k])
            axes = np.where((ls > 0)[..., None], axes, -np.roll(axes, -1, axis=1))
            vals = gen_vals[ls + n_gen]
            rotated = _inner(vals, axes).sum(axis=1)
            rotated_scale = (np.linalg.norm(vals, axis=-1) * np.linalg.norm(axes, axis=-1)).sum(axis=1)
            better = rotated_scale < scale[redo]
            out[idx[redo[better]]] = rotated[better]
    return out


def _frame(g: np.ndarray) -> HyperbolicFrame:
    # through the SL(2,R) lift: its eigenvectors are better conditioned
    return liealg.frame_from_lift(liealg.lift(g))


def margulis_at(g, uval, x) -> float:
    """``B(gamma(x) - x, X^0_g)`` for the affine map ``gamma(x) = g x + uval``."""
    g = np.asarray(g, dtype=float)
    x = np.asarray(x, dtype=float)
    return lorentz.inner(g @ x + uval - x, _frame(g).x_zero)


def invariant_axis(g, uval) -> InvariantAxis:
    g = np.asarray(g, dtype=float)
    frame = _frame(g)
    alpha, cm, cp = frame.coefficients(np.asarray(uval, dtype=float))
    lam = frame.lam
    # (g - I) acts by (lam - 1) on X^- and (1/lam - 1) on X^+
    base = frame.combine(0.0, -cm / (lam - 1.0), -cp / (1.0 / lam - 1.0))
    return InvariantAxis(base, frame.x_zero, float(alpha))


def gram_matrix(frames: Sequence[HyperbolicFrame]) -> np.ndarray:
    """Gram matrix ``[B(X^0_i, X^0_j)]`` of the three axis vectors of a pants."""
    x0 = [fr.x_zero for fr in frames]
    return np.array([[lorentz.inner(a, c) for c in x0] for a in x0])


def pants_system(frames: Sequence[HyperbolicFrame], f1: np.ndarray):
    """Assemble the pants relation ``f3^-1 u(f3) + f1 u(f2) + u(f1) = 0``.

    Returns ``(M, K)`` such that the relation paired with ``X^0_1, X^0_2,
    X^0_3`` reads ``M @ (c2+, c3-, c3+) = -K @ (a1, a2, a3, c1-, c1+, c2-)``.
    """
    fr1, fr2, fr3 = frames
    f1 = np.asarray(f1, dtype=float)
    lam3 = fr3.lam
    pair = np.array([lorentz.J @ fr.x_zero for fr in frames])
    unknown_cols = np.column_stack([f1 @ fr2.x_plus, fr3.x_minus / lam3, fr3.x_plus * lam3])
    known_cols = np.column_stack(
        [fr1.x_zero, f1 @ fr2.x_zero, fr3.x_zero, fr1.x_minus, fr1.x_plus, f1 @ fr2.x_minus]
    )
    return pair @ unknown_cols, pair @ known_cols


def solve_pants(
    frames: Sequence[HyperbolicFrame],
    f1: np.ndarray,
    alpha1: float,
    alpha2: float,
    alpha3: float,
    c1_minus: float,
    c1_plus: float,
    c2_minus: float,
) -> PantsCoefficients:
    """Solve the pants relation for ``(c2+, c3-, c3+)`` given the six knowns."""
    m, k = pants_system(frames, f1)
    det = float(np.linalg.det(m))
    if not abs(det) > SOLVE_DET_TOL:
        raise SingularSystem(f"pants system determinant {det:.3e}")
    knowns = np.array([alpha1, alpha2, alpha3, c1_minus, c1_plus, c2_minus], dtype=float)
    c2p, c3m, c3p = np.linalg.solve(m, -k @ knowns)
    return PantsCoefficients(
        alpha1, alpha2, alpha3, c1_minus, c1_plus, c2_minus, float(c2p), float(c3m), float(c3p)
    )


def pants_residual(frames, f1, coeffs: PantsCoefficients) -> float:
    """Euclidean norm of ``f3^-1 u(f3) + f1 u(f2) + u(f1)``."""
    u1, u2, u3 = coeffs.values(frames)
    f3 = frames[2]
    f3inv_u3 = f3.combine(coeffs.alpha3, coeffs.c3_minus / f3.lam, coeffs.c3_plus * f3.lam)
    return float(np.linalg.norm(f3inv_u3 + np.asarray(f1) @ u2 + u1))


def pants_frames(hol: Holonomy, j: int) -> tuple[tuple[Word, Word, Word], list[HyperbolicFrame]]:
    words = pants_presentation(j, hol.b)
    return words, [hol.frame(w) for w in words]


def base_cocycle(hol: Holonomy, alpha: Sequence[float], beta: Sequence[float]) -> Cocycle:
    """The gauge-fixed cocycle with prescribed invariants on all ``g_i`` and ``h_j``.

    Pants are filled in along the chain.  On ``P_1`` the gauge is
    ``c1- = c1+ = c2- = 0``; on each later pants the coefficients of the
    first generator are inherited from the previous pants and the gauge is
    ``c_{j+1}^- = 0``.
    """
    b = hol.b
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if alpha.shape != (b + 1,) or beta.shape != (b - 2,):
        raise ValueError(f"need {b + 1} alphas and {b - 2} betas")
    values = np.zeros((b, 3))

    words, frames = pants_frames(hol, 1)
    co = solve_pants(frames, hol.generators[1], alpha[0], alpha[1], beta[0], 0.0, 0.0, 0.0)
    u1, u2, u_h = co.values(frames)
    values[0], values[1] = u1, u2
    for j in range(2, b):
        (w1, _, _), frames = pants_frames(hol, j)
        hinv = hol.evaluate(w1)
        # u(h^-1) = -h^-1 u(h)
        u_first = -hinv @ u_h
        a1, c1m, c1p = frames[0].coefficients(u_first)
        a3 = alpha[b] if j == b - 1 else beta[j - 1]
        co = solve_pants(frames, hinv, a1, alpha[j], a3, c1m, c1p, 0.0)
        _, u2, u_h = co.values(frames)
        values[j] = u2
    return Cocycle(hol, values)


def affine_twist(hol: Holonomy, k: int) -> Cocycle:
    """``AT_k``: zero on ``P_1 .. P_k`` and the coboundary of ``Y^0_k`` beyond."""
    b = hol.b
    if not 1 <= k <= b - 2:
        raise IndexError(f"k must lie in [1, {b - 2}], got {k}")
    y0 = hol.h_frame(k).x_zero
    values = np.zeros((b, 3))
    for i in range(k + 2, b + 1):
        values[i - 1] = y0 - hol.generators[i] @ y0
    return Cocycle(hol, values)


def phi(hol: Holonomy, p: DeformationParams) -> Cocycle:
    """``u_0^{alpha,beta} + sum_k t_k AT_k``."""
    if p.b != hol.b:
        raise ValueError(f"parameters are for b={p.b}, holonomy has b={hol.b}")
    u = base_cocycle(hol, p.alpha, p.beta)
    for k, tk in enumerate(p.t, start=1):
        if tk:
            u = u + tk * affine_twist(hol, k)
    return u


def coordinate_words(hol: Holonomy) -> list[Word]:
    b = hol.b
    return (
        [Word.gen(i) for i in range(1, b + 2)]
        + [h_word(j, b) for j in range(1, b - 1)]
        + [f_word(l, b) for l in range(1, b - 1)]
    )


def cohomology_coordinates(u: Cocycle) -> np.ndarray:
    """Margulis invariants of ``g_1..g_{b+1}, h_1..h_{b-2}, f_1..f_{b-2}``.

    These ``3b - 3`` numbers vanish on coboundaries and are linear in ``u``.
    """
    return np.array([margulis(u, w) for w in coordinate_words(u.hol)])


def isomorphism_matrix(hol: Holonomy) -> np.ndarray:
    """Matrix of ``cohomology_coordinates o phi`` on the standard basis of D_b."""
    return np.column_stack(
        [cohomology_coordinates(phi(hol, e)) for e in DeformationParams.basis(hol.b)]
    )


def fit_coboundary(u: Cocycle) -> tuple[np.ndarray, float]:
    """Least-squares ``v`` with ``u ~ delta_v`` on ``g_1..g_b``; returns ``(v, max residual)``."""
    hol = u.hol
    a = np.vstack([np.eye(3) - hol.generators[i] for i in range(1, hol.b + 1)])
    rhs = u.values.reshape(-1)
    v, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    return v, float(np.abs(a @ v - rhs).max())


def gauge_coefficients(u: Cocycle) -> dict[str, float]:
    """Frame coefficients ``c1-, c1+, c2-`` that the base-cocycle gauge sets to zero."""
    _, c1m, c1p = u.hol.g_frame(1).coefficients(u.generator_value(1))
    _, c2m, _ = u.hol.g_frame(2).coefficients(u.generator_value(2))
    return {"c1_minus": float(c1m), "c1_plus": float(c1p), "c2_minus": float(c2m)}
