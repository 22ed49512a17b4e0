"""The isometry between sl2(R) and R^{2,1}, and the SL(2,R) <-> SO^0(2,1) lifts.

The traceless matrix ``[[v1, v2], [v3, -v1]]`` corresponds to the vector
``(v1, (v2 + v3)/2, (v3 - v2)/2)``.  Under this map the form
``1/2 tr(XY)`` on sl2 is the Lorentzian form ``B``.
"""
from __future__ import annotations

import numpy as np

from . import lorentz
from .errors import NotHyperbolic

TRACE_TOL = 1e-10

E1 = np.array([[1.0, 0.0], [0.0, -1.0]])
E2 = np.array([[0.0, 1.0], [1.0, 0.0]])
E3 = np.array([[0.0, -1.0], [1.0, 0.0]])


def psi(x) -> np.ndarray:
    """``sl2 -> R^{2,1}``; also maps a stack ``(..., 2, 2)`` to ``(..., 3)``."""
    x = np.asarray(x, dtype=float)
    a, b, c = x[..., 0, 0], x[..., 0, 1], x[..., 1, 0]
    return np.stack([a, 0.5 * (b + c), 0.5 * (c - b)], axis=-1)


def psi_inv(v) -> np.ndarray:
    a, b, c = np.asarray(v, dtype=float)
    return np.array([[a, b - c], [b + c, -a]])


def killing(x, y) -> float:
    return 0.5 * float(np.trace(np.asarray(x) @ np.asarray(y)))


def expm_sl2(x) -> np.ndarray:
    """Matrix exponential of a traceless 2x2 matrix (closed form).

    ``X @ X = q I`` with ``q = -det X``, so ``exp X`` is ``cosh``/``cos``
    of ``sqrt|q|`` times the identity plus the matching odd part.
    """
    x = np.asarray(x, dtype=float)
    q = -float(np.linalg.det(x))
    if q > 1e-14:
        r = np.sqrt(q)
        return np.cosh(r) * np.eye(2) + (np.sinh(r) / r) * x
    if q < -1e-14:
        r = np.sqrt(-q)
        return np.cos(r) * np.eye(2) + (np.sin(r) / r) * x
    return np.eye(2) + x + 0.5 * q * np.eye(2)


def inverse_sl2(g) -> np.ndarray:
    """Inverse of a determinant-one matrix, or of each matrix in a stack."""
    g = np.asarray(g, dtype=float)
    out = np.empty_like(g)
    out[..., 0, 0], out[..., 1, 1] = g[..., 1, 1], g[..., 0, 0]
    out[..., 0, 1], out[..., 1, 0] = -g[..., 0, 1], -g[..., 1, 0]
    return out


_PSI_BASIS = (psi_inv([1.0, 0.0, 0.0]), psi_inv([0.0, 1.0, 0.0]), psi_inv([0.0, 0.0, 1.0]))


def adjoint(gtilde) -> np.ndarray:
    """Matrix of ``X -> g X g^{-1}`` in the psi-basis; lies in SO^0(2,1).

    A stack ``(..., 2, 2)`` gives a stack ``(..., 3, 3)``.
    """
    g = np.asarray(gtilde, dtype=float)
    ginv = inverse_sl2(g)
    return np.stack([psi(g @ e @ ginv) for e in _PSI_BASIS], axis=-1)


# Dual basis of _PSI_BASIS under (X, Y) -> tr(XY).
_PSI_DUAL = (0.5 * _PSI_BASIS[0], 0.5 * _PSI_BASIS[1], -0.5 * _PSI_BASIS[2])


def lift(g) -> np.ndarray:
    """Positive-trace SL(2,R) matrix whose adjoint is the hyperbolic isometry ``g``.

    This is ``exp((l/2) psi_inv(X^0))``, but computed without an eigen-solve:
    summing ``Ad(g~)(E_k) E^k`` over a basis and its trace-dual gives
    ``tr(g~) g~ - I/2``, and ``tr(g~)^2 = tr(g) + 1``.
    """
    g = np.asarray(g, dtype=float)
    if not lorentz.is_hyperbolic(g):
        raise NotHyperbolic("lift needs a hyperbolic isometry")
    m = sum(psi_inv(g[:, k]) @ _PSI_DUAL[k] for k in range(3))
    tau = np.sqrt(float(np.trace(g)) + 1.0)
    return (m + 0.5 * np.eye(2)) / tau


def translation_length(gtilde) -> float:
    """``2 arccosh(|tr|/2)``, i.e. ``-2 log(mu)`` for eigenvalues ``+-mu, +-1/mu``."""
    t = abs(float(np.trace(gtilde)))
    if t <= 2.0 + TRACE_TOL:
        raise NotHyperbolic(f"|trace| = {t!r} is not > 2")
    return 2.0 * float(np.arccosh(0.5 * t))


def axis_vector(gtilde) -> np.ndarray:
    """Unit axis vector ``X^0`` of ``adjoint(gtilde)`` read off the 2x2 matrix.

    The traceless part of the positive-trace lift is ``sinh(l/2) psi_inv(X^0)``.
    Cheaper and better conditioned than an eigen-decomposition of the 3x3 image.
    """
    g = np.asarray(gtilde, dtype=float)
    t = float(np.trace(g))
    if abs(t) <= 2.0 + TRACE_TOL:
        raise NotHyperbolic(f"|trace| = {abs(t)!r} is not > 2")
    v = psi(g - 0.5 * t * np.eye(2)) * np.sign(t)
    return v / np.sqrt(lorentz.inner(v, v))


def axis_vectors(gtilde) -> np.ndarray:
    """:func:`axis_vector` over a stack ``(..., 2, 2)``; ``nan`` rows where not hyperbolic."""
    g = np.asarray(gtilde, dtype=float)
    t = g[..., 0, 0] + g[..., 1, 1]
    # psi of the traceless part: only the E1 component sees the identity
    v = psi(g)
    v[..., 0] = 0.5 * (g[..., 0, 0] - g[..., 1, 1])
    v = v * np.sign(t)[..., None]
    norm2 = v[..., 0] ** 2 + v[..., 1] ** 2 - v[..., 2] ** 2
    ok = np.abs(t) > 2.0 + TRACE_TOL
    with np.errstate(invalid="ignore", divide="ignore"):
        v = v / np.sqrt(np.where(ok, norm2, np.nan))[..., None]
    return v


_ROT = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _eigvec(g, mu) -> np.ndarray:
    (a, b), (c, d) = g
    u = np.array([b, mu - a])
    v = np.array([mu - d, c])
    return u if np.hypot(*u) >= np.hypot(*v) else v


def _null_from_eigvec(v) -> np.ndarray:
    # Ad(g~) scales psi(v v^T R) by mu^2 when g~ v = mu v.
    x = psi(np.outer(v, v) @ _ROT)
    x = x / np.linalg.norm(x)
    return x if x[2] > 0 else -x


def frame_from_lift(gtilde) -> lorentz.HyperbolicFrame:
    """Frame of ``adjoint(gtilde)`` computed from the 2x2 matrix.

    Products of many generators have large 3x3 entries but only moderately
    large 2x2 entries, so this route loses far less precision than an
    eigen-solve of the 3x3 image.
    """
    g = np.asarray(gtilde, dtype=float)
    g = g * np.sign(np.trace(g))
    t = float(np.trace(g))
    if t <= 2.0 + TRACE_TOL:
        raise NotHyperbolic(f"|trace| = {t!r} is not > 2")
    s = np.sqrt((t - 2.0) * (t + 2.0))
    mu_big = 0.5 * (t + s)
    mu_small = 1.0 / mu_big
    x_minus = _null_from_eigvec(_eigvec(g, mu_small))
    x_plus = _null_from_eigvec(_eigvec(g, mu_big))
    return lorentz.HyperbolicFrame(x_minus, x_plus, axis_vector(g), mu_small * mu_small)
