"""Fuchsian holonomy of a sphere with ``b + 1`` holes.

The group is ``<g_1, ..., g_{b+1} | g_1 g_2 ... g_{b+1} = 1>``, decomposed
into the chain of pants

    P_1     = (g_1, g_2, h_1)
    P_j     = (h_{j-1}^{-1}, g_{j+1}, h_j)        2 <= j <= b-2
    P_{b-1} = (h_{b-2}^{-1}, g_b, g_{b+1})

with dividing curves ``h_j = g_{j+1}^{-1} ... g_1^{-1}``.  Every triple
multiplies to the identity.

The holonomy is built pants by pants in SL(2, R) from Fenchel-Nielsen
data and pushed to SO^0(2,1) by the adjoint representation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import optimize

from . import liealg, lorentz
from .errors import ConstructionFailed, NotHyperbolic
from .words import Word

RELATION_TOL = 1e-9
LENGTH_TOL = 1e-6

DEFAULT_BOUNDARY = 1.0
DEFAULT_DIVIDING = 3.0
DEFAULT_TWIST = 0.5


def _check_index(name: str, j: int, lo: int, hi: int) -> None:
    if not lo <= j <= hi:
        raise IndexError(f"{name} must lie in [{lo}, {hi}], got {j}")


def h_word(j: int, b: int | None = None) -> Word:
    """``h_j = g_{j+1}^{-1} g_j^{-1} ... g_1^{-1}``."""
    _check_index("j", j, 1, (b - 2) if b is not None else j)
    return Word(-x for x in range(j + 1, 0, -1))


def f_word(l: int, b: int | None = None) -> Word:
    """``f_l = g_{l+2}^{-1} g_{l+1}^{-1}``, the curve crossing ``h_l`` twice."""
    _check_index("l", l, 1, (b - 2) if b is not None else l)
    return Word([-(l + 2), -(l + 1)])


def pants_presentation(j: int, b: int) -> tuple[Word, Word, Word]:
    _check_index("j", j, 1, b - 1)
    first = Word.gen(1) if j == 1 else h_word(j - 1).inverse()
    third = Word.gen(b + 1) if j == b - 1 else h_word(j)
    return first, Word.gen(j + 1), third


@dataclass(frozen=True)
class HolonomySpec:
    """Fenchel-Nielsen data: ``b+1`` boundary lengths, ``b-2`` dividing lengths and twists."""

    b: int
    boundary_lengths: tuple[float, ...]
    dividing_lengths: tuple[float, ...]
    hyperbolic_twists: tuple[float, ...]

    def __post_init__(self):
        for name in ("boundary_lengths", "dividing_lengths", "hyperbolic_twists"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

    @classmethod
    def symmetric(
        cls,
        b: int,
        boundary: float = DEFAULT_BOUNDARY,
        dividing: float = DEFAULT_DIVIDING,
        twist: float = DEFAULT_TWIST,
    ) -> "HolonomySpec":
        """All boundary lengths equal, all dividing lengths equal, all twists equal.

        The defaults keep the relation residual near 1e-11 up to ``b = 5``.
        A nonzero twist matters: with zero twist every ``f_l`` is orthogonal
        to ``h_l`` and the affine twists become invisible to the invariants.
        """
        return cls(b, (boundary,) * (b + 1), (dividing,) * (b - 2), (twist,) * (b - 2))

    def validate(self) -> None:
        if not isinstance(self.b, (int, np.integer)) or isinstance(self.b, bool) or self.b < 3:
            raise ConstructionFailed(f"b must be an integer >= 3, got {self.b!r}")
        b = self.b
        sizes = {"boundary_lengths": b + 1, "dividing_lengths": b - 2, "hyperbolic_twists": b - 2}
        for name, n in sizes.items():
            if len(getattr(self, name)) != n:
                raise ConstructionFailed(f"{name} needs {n} entries, got {len(getattr(self, name))}")
        for name in ("boundary_lengths", "dividing_lengths"):
            vals = np.asarray(getattr(self, name))
            if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
                raise ConstructionFailed(f"{name} must be finite and > 0 (no cusps): {vals.tolist()}")
        if not np.all(np.isfinite(self.hyperbolic_twists)):
            raise ConstructionFailed("hyperbolic_twists must be finite")


@dataclass(frozen=True)
class OrientationMargins:
    """Worst values of the consistently-oriented inequalities (all must be < 0)."""

    axis_axis: float  # max over m != n of B(X0_m, X0_n) + 1
    axis_endpoint: float  # max over m != n of B(X0_m, X^{+-}_n)
    table: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return self.axis_axis < 0 and self.axis_endpoint < 0


class Holonomy:
    """The fixed representation of ``G_b`` in SO^0(2,1), with cached frames.

    Generators are indexed ``1 .. b+1``; ``lifts[i]`` is an SL(2,R) matrix
    with ``adjoint(lifts[i]) == generators[i]``.
    """

    def __init__(self, spec: HolonomySpec, lifts: Sequence[np.ndarray]):
        self.spec = spec
        self.b = spec.b
        self.lifts = {i: np.asarray(m, dtype=float) for i, m in enumerate(lifts, start=1)}
        self.generators = {i: liealg.adjoint(m) for i, m in self.lifts.items()}
        self._inverses = {i: lorentz.inverse(m) for i, m in self.generators.items()}
        self._frame_cache: dict[Word, lorentz.HyperbolicFrame] = {}

    def matrix(self, letter: int) -> np.ndarray:
        return self.generators[letter] if letter > 0 else self._inverses[-letter]

    def evaluate(self, w: Word) -> np.ndarray:
        """Image of ``w`` in SO^0(2,1), multiplied out in SL(2,R) for accuracy."""
        return liealg.adjoint(self.evaluate_lift(w))

    def evaluate_lift(self, w: Word) -> np.ndarray:
        m = np.eye(2)
        for x in w:
            g = self.lifts[abs(x)]
            m = m @ (g if x > 0 else liealg.inverse_sl2(g))
        return m

    def frame(self, w: Word) -> lorentz.HyperbolicFrame:
        fr = self._frame_cache.get(w)
        if fr is None:
            fr = liealg.frame_from_lift(self.evaluate_lift(w))
            if w in self._cacheable:
                self._frame_cache[w] = fr
        return fr

    @cached_property
    def _named(self) -> dict[str, Word]:
        b = self.b
        out = {f"g{i}": Word.gen(i) for i in range(1, b + 2)}
        out.update({f"h{j}": h_word(j, b) for j in range(1, b - 1)})
        out.update({f"f{l}": f_word(l, b) for l in range(1, b - 1)})
        return out

    @cached_property
    def _cacheable(self) -> frozenset[Word]:
        return frozenset(self._named.values())

    def named_words(self) -> dict[str, Word]:
        return dict(self._named)

    def g_frame(self, i: int) -> lorentz.HyperbolicFrame:
        return self.frame(Word.gen(i))

    def h_frame(self, j: int) -> lorentz.HyperbolicFrame:
        return self.frame(h_word(j, self.b))

    def relation_residual(self) -> float:
        w = Word(range(1, self.b + 2))
        return float(np.abs(self.evaluate(w) - np.eye(3)).max())

    def realized_length(self, w: Word) -> float:
        return liealg.translation_length(self.evaluate_lift(w))

    def length_errors(self) -> dict[str, float]:
        b, spec = self.b, self.spec
        errs = {}
        for i in range(1, b + 2):
            errs[f"g{i}"] = abs(self.realized_length(Word.gen(i)) - spec.boundary_lengths[i - 1])
        for j in range(1, b - 1):
            errs[f"h{j}"] = abs(self.realized_length(h_word(j, b)) - spec.dividing_lengths[j - 1])
        return errs

    def orientation_margins(self) -> OrientationMargins:
        table = {}
        worst_aa = worst_ae = -np.inf
        frames = {i: self.g_frame(i) for i in range(1, self.b + 2)}
        for m, n in itertools.permutations(frames, 2):
            x0 = frames[m].x_zero
            aa = lorentz.inner(x0, frames[n].x_zero)
            em = lorentz.inner(x0, frames[n].x_minus)
            ep = lorentz.inner(x0, frames[n].x_plus)
            table[(m, n)] = (aa, em, ep)
            worst_aa = max(worst_aa, aa + 1.0)
            worst_ae = max(worst_ae, em, ep)
        return OrientationMargins(worst_aa, worst_ae, table)

    def certify(self) -> None:
        """Raise :class:`ConstructionFailed` unless every holonomy invariant holds."""
        res = self.relation_residual()
        if not res <= RELATION_TOL:
            raise ConstructionFailed(f"relation residual {res:.3e} exceeds {RELATION_TOL}")
        for name, w in self._named.items():
            try:
                self.frame(w)
            except NotHyperbolic as exc:
                raise ConstructionFailed(f"{name} is not hyperbolic: {exc}") from exc
        for name, err in self.length_errors().items():
            if not err <= LENGTH_TOL:
                raise ConstructionFailed(f"length of {name} off by {err:.3e}")
        margins = self.orientation_margins()
        for (m, n), (aa, em, ep) in margins.table.items():
            if not aa < -1.0:
                raise ConstructionFailed(f"B(X0_{m}, X0_{n}) = {aa:.6g} is not < -1")
            if not (em < 0 and ep < 0):
                raise ConstructionFailed(
                    f"B(X0_{m}, X-_{n}) = {em:.6g}, B(X0_{m}, X+_{n}) = {ep:.6g}; both must be < 0"
                )


def _second_generator(half_length: float, l2: float, l3: float) -> np.ndarray:
    """Second generator of a pants whose first generator is ``diag(e^x, e^-x)``.

    Traces: ``tr F2 = 2 cosh(l2/2)`` and ``tr(F1 F2) = -2 cosh(l3/2)``; the
    negative product trace is what makes the three axes bound a common
    region.  The off-diagonal entries are ``-c, c`` so that the common
    perpendicular to the first axis (the imaginary axis) has its foot at
    ``i``, and ``c > 0`` puts the second axis to the left of the first.
    """
    x = half_length
    t2 = 2.0 * np.cosh(0.5 * l2)
    t12 = -2.0 * np.cosh(0.5 * l3)
    a = (t12 - np.exp(-x) * t2) / (2.0 * np.sinh(x))
    d = t2 - a
    c = np.sqrt(1.0 - a * d)  # a < 0 < d, so 1 - ad > 1
    return np.array([[a, -c], [c, d]])


def _normal_frame(f1: np.ndarray, neighbour: np.ndarray) -> np.ndarray:
    """``k`` in SL(2,R) with ``k^-1 f1 k`` diagonal (expanding entry first).

    The remaining diagonal freedom is fixed by sending the foot of the
    common perpendicular from the axis of ``neighbour`` to ``i``.
    """
    if np.trace(f1) < 0:
        f1 = -f1
    w, v = np.linalg.eig(f1)
    order = np.argsort(-w.real)
    v = v[:, order].real
    det = np.linalg.det(v)
    if det < 0:
        v[:, 1] = -v[:, 1]
        det = -det
    k = v / np.sqrt(det)
    (a, b), (c, d) = liealg.inverse_sl2(k) @ neighbour @ k
    # fixed points p, q of the neighbour satisfy c z^2 + (d - a) z - b = 0
    pq = -b / c
    if not pq > 0:
        raise ConstructionFailed("neighbouring axis crosses the gluing axis")
    s = pq ** 0.25
    return k @ np.diag([s, 1.0 / s])


def _displacement(g: np.ndarray) -> float:
    # ||g||_F^2 = 2 cosh d(i, g i) for g in SL(2, R)
    return float(np.arccosh(max(1.0, 0.5 * float(np.sum(g * g)))))


def _balance(lifts: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Conjugate so the base point minimizes the total displacement.

    The displacement of a point is a convex function on the hyperbolic
    plane, so the minimizer is unique; putting it at ``i`` keeps matrix
    entries (and rounding error in long products) as small as possible.
    """

    def conj(p):
        k = liealg.expm_sl2(0.5 * (p[0] * liealg.E1 + p[1] * liealg.E2))
        kinv = liealg.inverse_sl2(k)
        return [kinv @ g @ k for g in lifts]

    res = optimize.minimize(
        lambda p: sum(_displacement(g) for g in conj(p)), np.zeros(2), method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 2000},
    )
    return conj(res.x)


def build_holonomy(spec: HolonomySpec) -> Holonomy:
    """Build and certify the holonomy from Fenchel-Nielsen data.

    Pants ``P_1`` is put in normal form with ``g_1`` diagonal.  Each later
    pants ``P_j`` is built in the normal frame of ``h_{j-1}^{-1}``, with
    zero twist meaning the seams from ``g_j`` and ``g_{j+1}`` hit the axis
    of ``h_{j-1}`` at the same point; twist ``tau`` then conjugates by the
    flow ``exp(tau/2 * psi^-1(Y0_{j-1}))`` along that axis.  Everything
    built so far is moved into that frame first, so each new pants is
    computed near the base point.
    """
    spec.validate()
    b = spec.b
    bl, dl, tw = spec.boundary_lengths, spec.dividing_lengths, spec.hyperbolic_twists
    g: dict[int, np.ndarray] = {}

    x = 0.5 * bl[0]
    g[1] = np.diag([np.exp(x), np.exp(-x)])
    g[2] = _second_generator(x, bl[1], dl[0])
    h = liealg.inverse_sl2(g[1] @ g[2])
    for j in range(2, b):
        k = _normal_frame(liealg.inverse_sl2(h), g[j])
        kinv = liealg.inverse_sl2(k)
        g = {i: kinv @ m @ k for i, m in g.items()}
        h = kinv @ h @ k
        last = bl[b] if j == b - 1 else dl[j - 1]
        local = _second_generator(0.5 * dl[j - 2], bl[j], last)
        # X0 of h_{j-1}^{-1} is E1 in this frame, so the flow along Y0_{j-1} is exp(-tau/2 E1)
        flow = liealg.expm_sl2(-0.5 * tw[j - 2] * liealg.E1)
        g[j + 1] = flow @ local @ liealg.inverse_sl2(flow)
        h = liealg.inverse_sl2(g[j + 1]) @ h
    # after the last step h = g_b^{-1} h_{b-2} = g_{b+1}
    g[b + 1] = h

    lifts = _balance([g[i] for i in range(1, b + 2)])
    # Close the relation in floating point: cocycle values of g_{b+1} are
    # read off the relation, so its matrix must be that same product.
    prod = np.eye(2)
    for m in lifts[:b]:
        prod = prod @ m
    lifts[b] = liealg.inverse_sl2(prod)
    lifts = [m if np.trace(m) > 0 else -m for m in lifts]
    hol = Holonomy(spec, lifts)
    hol.certify()
    return hol
