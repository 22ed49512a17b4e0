"""Linear algebra of the Minkowski space R^{2,1}.

Vectors are plain ``numpy`` arrays of shape ``(3,)`` with the timelike
coordinate last; isometries are ``(3, 3)`` arrays in SO^0(2,1).  The
bilinear form is ``B(x, y) = x1*y1 + x2*y2 - x3*y3``.

Tolerances are absolute and assume O(1)-normalized inputs.  Frames of
isometries with entries beyond ~1e6 lose accuracy.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import AxesDisjoint, NotHyperbolic

#: Gram matrix of the Lorentzian form.
J = np.diag([1.0, 1.0, -1.0])

EPS_NULL = 1e-9
EIGEN_GAP = 1e-8
ANGLE_TOL = 1e-9


class Kind(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


class Orientation(enum.Enum):
    FUTURE = "future"
    PAST = "past"
    NONE = "none"


@dataclass(frozen=True)
class CausalClass:
    kind: Kind
    orientation: Orientation


@dataclass(frozen=True)
class HyperbolicFrame:
    """Normalized eigenframe of a hyperbolic isometry ``g``.

    ``g @ x_minus = lam * x_minus``, ``g @ x_plus = x_plus / lam`` and
    ``g @ x_zero = x_zero`` with ``0 < lam < 1``.  Both null vectors have
    Euclidean length one and point to the future; ``x_zero`` is B-unit with
    ``det(x_zero, x_minus, x_plus) > 0``.
    """

    x_minus: np.ndarray
    x_plus: np.ndarray
    x_zero: np.ndarray
    lam: float

    @property
    def length(self) -> float:
        """Hyperbolic translation length ``-log(lam)`` of the axis."""
        return -float(np.log(self.lam))

    def coefficients(self, v: np.ndarray) -> np.ndarray:
        """Coordinates ``(a0, a_minus, a_plus)`` of ``v`` in this frame."""
        basis = np.column_stack([self.x_zero, self.x_minus, self.x_plus])
        return np.linalg.solve(basis, v)

    def combine(self, a0: float, a_minus: float, a_plus: float) -> np.ndarray:
        return a0 * self.x_zero + a_minus * self.x_minus + a_plus * self.x_plus


def inner(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(x[0] * y[0] + x[1] * y[1] - x[2] * y[2])


def cross(x, y) -> np.ndarray:
    """Lorentzian vector product: the unique ``w`` with ``B(w, z) = det(x, y, z)``."""
    return J @ np.cross(np.asarray(x, dtype=float), np.asarray(y, dtype=float))


def classify(x, eps: float = EPS_NULL) -> CausalClass:
    x = np.asarray(x, dtype=float)
    q = inner(x, x)
    if not np.any(x):
        return CausalClass(Kind.LIGHTLIKE, Orientation.NONE)
    if q > eps:
        return CausalClass(Kind.SPACELIKE, Orientation.NONE)
    kind = Kind.TIMELIKE if q < -eps else Kind.LIGHTLIKE
    if x[2] > 0:
        return CausalClass(kind, Orientation.FUTURE)
    if x[2] < 0:
        return CausalClass(kind, Orientation.PAST)
    # lightlike within tolerance but x3 == 0: tiny spacelike-ish vector
    return CausalClass(kind, Orientation.NONE)


def is_isometry(m, tol: float = 1e-9) -> bool:
    """True if ``m`` preserves B, has det 1 and preserves time orientation."""
    m = np.asarray(m, dtype=float)
    scale = max(1.0, float(np.abs(m).max()) ** 2)
    return (
        np.allclose(m.T @ J @ m, J, atol=tol * scale)
        and abs(np.linalg.det(m) - 1.0) <= tol * scale
        and m[2, 2] > 0
    )


def inverse(m) -> np.ndarray:
    """Inverse of an O(2,1) matrix, ``J m^T J``."""
    return J @ np.asarray(m, dtype=float).T @ J


def eigenvalue(g) -> float:
    """Contracting eigenvalue ``lam`` of a hyperbolic isometry.

    For ``g`` in SO^0(2,1) the characteristic polynomial factors as
    ``(x - 1)(x^2 - (tr g - 1) x + 1)``; the quadratic must have two real
    roots well separated from each other and from 1.
    """
    g = np.asarray(g, dtype=float)
    s = float(np.trace(g)) - 1.0
    disc = s * s - 4.0
    if not np.isfinite(disc) or disc <= 0.0:
        raise NotHyperbolic(f"trace {s + 1.0!r} gives no real eigenvalue pair")
    big = 0.5 * (s + np.sqrt(disc))
    lam = 1.0 / big
    if big - lam <= EIGEN_GAP or min(abs(lam - 1.0), abs(big - 1.0)) <= EIGEN_GAP:
        raise NotHyperbolic(f"eigenvalues {lam!r}, 1, {big!r} are not separated")
    return lam


def _null_vector(m: np.ndarray) -> np.ndarray:
    _, _, vt = np.linalg.svd(m)
    return vt[-1]


def hyperbolic_frame(g) -> HyperbolicFrame:
    g = np.asarray(g, dtype=float)
    lam = eigenvalue(g)
    eye = np.eye(3)
    x_minus = _null_vector(g - lam * eye)
    x_plus = _null_vector(g - eye / lam)
    x_minus = x_minus / np.linalg.norm(x_minus)
    x_plus = x_plus / np.linalg.norm(x_plus)
    if x_minus[2] < 0:
        x_minus = -x_minus
    if x_plus[2] < 0:
        x_plus = -x_plus
    x_zero = _null_vector(g - eye)
    x_zero = x_zero / np.sqrt(inner(x_zero, x_zero))
    if np.linalg.det(np.column_stack([x_zero, x_minus, x_plus])) < 0:
        x_zero = -x_zero
    return HyperbolicFrame(x_minus, x_plus, x_zero, lam)


def is_hyperbolic(g) -> bool:
    try:
        eigenvalue(g)
    except NotHyperbolic:
        return False
    return True


def axis_angle(g, h) -> float:
    """Angle in ``[0, pi]`` between the crossing axes of ``g`` and ``h``."""
    c = inner(hyperbolic_frame(g).x_zero, hyperbolic_frame(h).x_zero)
    return angle_from_cosine(c)


def angle_from_cosine(c: float) -> float:
    if abs(c) > 1.0 + ANGLE_TOL:
        raise AxesDisjoint(f"B(X0_g, X0_h) = {c!r}; axes do not cross")
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def boost(axis: int, s: float) -> np.ndarray:
    """Hyperbolic rotation by rapidity ``s`` fixing the spacelike basis vector ``axis``."""
    other = 1 - axis
    m = np.eye(3)
    m[other, other] = m[2, 2] = np.cosh(s)
    m[other, 2] = m[2, other] = np.sinh(s)
    return m


def rotation(phi: float) -> np.ndarray:
    """Elliptic rotation about the timelike axis ``(0, 0, 1)``."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
