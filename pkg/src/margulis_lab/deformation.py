"""First-order deformations of hyperbolic length along a cocycle.

A cocycle ``u`` deforms the lifted holonomy through the homomorphisms
``iota_t(g_i~) = exp(t psi^-1(u(g_i))) g_i~``, which agree with
``g~ exp(t psi^-1(g^-1 u(g)))`` for every ``g``.  Half the derivative of
the translation length at ``t = 0`` is the Margulis invariant of ``g``;
this module computes that derivative by finite differences and checks the
twist-angle formula for the curves ``f_l``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import liealg, lorentz
from .affine import Cocycle, DeformationParams, affine_twist, base_cocycle, margulis, phi
from .errors import NotHyperbolic, StepLeavesHyperbolicLocus
from .fuchsian import Holonomy, f_word
from .words import Word

DEFAULT_STEP = 1e-5
PATHS = ("representation", "word")


def deformed_lift(hol: Holonomy, u: Cocycle, w: Word, t: float) -> np.ndarray:
    """``iota_t(w~)``: the product of the deformed generator lifts along ``w``."""
    m = np.eye(2)
    for x in w:
        i = abs(x)
        g = liealg.expm_sl2(t * liealg.psi_inv(u.generator_value(i))) @ hol.lifts[i]
        m = m @ (g if x > 0 else liealg.inverse_sl2(g))
    return m


def _half_length(m: np.ndarray, t: float) -> float:
    try:
        return 0.5 * liealg.translation_length(m)
    except NotHyperbolic as exc:
        raise StepLeavesHyperbolicLocus(f"t = {t!r}: {exc}") from exc


def half_length_curve(hol: Holonomy, u: Cocycle, w: Word, path: str = "representation"):
    """The function ``t -> 1/2 L(t)`` along the chosen deformation path.

    ``"representation"`` deforms every generator and multiplies out.
    ``"word"`` uses the single exponential ``lift(w) exp(t psi^-1(u(w)))``;
    it has the same derivative at 0, but its higher derivatives grow with
    ``B(u(w), u(w))``, which is large for long words.
    """
    if path == "representation":
        return lambda t: _half_length(deformed_lift(hol, u, w, t), t)
    if path == "word":
        gtilde = liealg.lift(hol.evaluate(w))
        direction = liealg.psi_inv(u(w))
        return lambda t: _half_length(gtilde @ liealg.expm_sl2(t * direction), t)
    raise ValueError(f"path must be one of {PATHS}, got {path!r}")


def _central(f, step):
    return (f(step) - f(-step)) / (2.0 * step)


def length_derivative(
    hol: Holonomy,
    u: Cocycle,
    w: Word,
    step: float = DEFAULT_STEP,
    richardson: bool = False,
    path: str = "representation",
) -> float:
    """Central-difference estimate of ``1/2 dL/dt(0)`` for the word ``w``.

    With ``richardson=True`` the steps ``h`` and ``h/2`` are combined to
    cancel the ``O(h^2)`` term.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    f = half_length_curve(hol, u, w, path)
    d = _central(f, step)
    if richardson:
        d = (4.0 * _central(f, 0.5 * step) - d) / 3.0
    return d


def convergence_order(
    hol: Holonomy, u: Cocycle, w: Word, step: float | None = None, path: str = "representation"
) -> float:
    """Observed order ``log2(|D(h) - D(h/2)| / |D(h/2) - D(h/4)|)`` of the central difference.

    The default step ``0.1 / sqrt(1 + |B(u(w), u(w))|)`` keeps the
    differences above rounding level.  Returns ``inf`` when the difference
    quotient is exact to rounding (e.g. powers of a single generator, whose
    half length is affine in ``t``).
    """
    if step is None:
        uw = u(w)
        step = 0.1 / np.sqrt(1.0 + abs(lorentz.inner(uw, uw)))
    f = half_length_curve(hol, u, w, path)
    d1, d2, d4 = (_central(f, step / k) for k in (1.0, 2.0, 4.0))
    noise = 64 * np.finfo(float).eps * max(1.0, abs(d1)) / step
    if abs(d1 - d2) <= noise and abs(d2 - d4) <= noise:
        return float("inf")
    return float(np.log2(abs(d1 - d2) / abs(d2 - d4)))


@dataclass(frozen=True)
class TwistPairing:
    """``B(Y0_l - g_{l+1} Y0_l, X0_{f_l})`` and its split into two crossing angles."""

    value: float
    theta: float
    theta_prime: float

    @property
    def from_angles(self) -> float:
        return float(np.cos(self.theta) + np.cos(self.theta_prime))


def twist_pairing(hol: Holonomy, l: int) -> TwistPairing:
    """Pairing of the twist coboundary with the axis of ``f_l``.

    ``f_l`` crosses the axis of ``h_l`` (angle ``theta``) and its translate
    by ``g_{l+1}`` (angle ``theta'``, measured from the other side, hence
    ``pi - arccos``).  The pairing equals ``cos(theta) + cos(theta')``.
    """
    b = hol.b
    if not 1 <= l <= b - 2:
        raise IndexError(f"l must lie in [1, {b - 2}], got {l}")
    y0 = hol.h_frame(l).x_zero
    xf = hol.frame(f_word(l, b)).x_zero
    moved = hol.generators[l + 1] @ y0
    value = lorentz.inner(y0 - moved, xf)
    theta = lorentz.angle_from_cosine(lorentz.inner(y0, xf))
    theta_prime = np.pi - lorentz.angle_from_cosine(lorentz.inner(moved, xf))
    return TwistPairing(float(value), theta, float(theta_prime))


@dataclass(frozen=True)
class TwistCheck:
    l: int
    t_l: float
    lhs: float  # 1/2 dL_{f_l}/dt (0), finite differences
    rhs: float  # alpha_{u0}(f_l) + t_l * pairing
    margulis: float  # alpha_u(f_l), exact
    residual: float

    @property
    def margulis_residual(self) -> float:
        return abs(self.margulis - self.rhs)


def verify_twist_formula(
    hol: Holonomy, p: DeformationParams, l: int, step: float = DEFAULT_STEP
) -> TwistCheck:
    """Compare ``1/2 dL_{f_l}/dt(0)`` for ``u = phi(p)`` with ``alpha_{u0}(f_l) + t_l * pairing``."""
    w = f_word(l, hol.b)
    u = phi(hol, p)
    u0 = base_cocycle(hol, p.alpha, p.beta)
    t_l = p.t[l - 1]
    rhs = margulis(u0, w) + t_l * twist_pairing(hol, l).value
    lhs = length_derivative(hol, u, w, step)
    return TwistCheck(l, t_l, lhs, rhs, margulis(u, w), abs(lhs - rhs))


def twist_margulis(hol: Holonomy, k: int, w: Word) -> float:
    """Margulis invariant of ``AT_k`` on ``w`` (zero unless ``w`` crosses ``h_k``)."""
    return margulis(affine_twist(hol, k), w)


__all__ = [
    "DEFAULT_STEP",
    "TwistCheck",
    "TwistPairing",
    "convergence_order",
    "PATHS",
    "deformed_lift",
    "half_length_curve",
    "length_derivative",
    "twist_margulis",
    "twist_pairing",
    "verify_twist_formula",
]
