"""Seeded verification suites; each returns rows ``(check, lhs, rhs, residual, tolerance)``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import liealg, lorentz
from .affine import DeformationParams, base_cocycle, coboundary, cohomology_coordinates, isomorphism_matrix, margulis, phi
from .deformation import convergence_order, length_derivative, twist_pairing
from .fuchsian import Holonomy, f_word
from .words import Word

DEFAULT_TOLERANCES = {
    "lorentz": 1e-10,
    "frame": 1e-9,
    "iso_det": 1e-12,
    "coboundary": 1e-9,
    "gm": 1e-6,
    "order": 1.9,
    "twist": 1e-6,
    "twist_margulis": 1e-8,
}

SUITES = ("lorentz", "iso", "gm", "twist")


@dataclass(frozen=True)
class Row:
    check: str
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    # residual <= tolerance, except for lower bounds such as |det| and the order
    lower_bound: bool = False

    @property
    def passed(self) -> bool:
        if self.lower_bound:
            return bool(self.residual > self.tolerance)
        return bool(self.residual <= self.tolerance)


def random_word(rng: np.random.Generator, n_gens: int, length: int) -> Word:
    letters: list[int] = []
    while len(letters) < length:
        x = int(rng.choice((1, -1)) * rng.integers(1, n_gens + 1))
        if letters and letters[-1] == -x:
            continue
        letters.append(x)
    return Word(letters)


def random_params(rng: np.random.Generator, b: int, scale: float = 1.0) -> DeformationParams:
    return DeformationParams.from_vector(b, rng.uniform(-scale, scale, 3 * b - 3))


def random_sl2_hyperbolic(rng: np.random.Generator, min_trace: float = 2.1) -> np.ndarray:
    while True:
        m = rng.normal(size=(2, 2))
        d = np.linalg.det(m)
        if d <= 1e-3:
            continue
        m = m / np.sqrt(d)
        if abs(np.trace(m)) > min_trace:
            return m


def lorentz_suite(rng, tol) -> list[Row]:
    n = 10_000
    x, y, z, w = (rng.uniform(-1, 1, (n, 3)) for _ in range(4))
    cr_xy = np.array([lorentz.cross(a, c) for a, c in zip(x, y)])
    cr_zw = np.array([lorentz.cross(a, c) for a, c in zip(z, w)])
    bl = lambda a, c: a[:, 0] * c[:, 0] + a[:, 1] * c[:, 1] - a[:, 2] * c[:, 2]  # noqa: E731
    dets = np.linalg.det(np.stack([x, y, z], axis=-1))
    r1 = np.abs(dets - bl(cr_xy, z))
    lhs2 = bl(cr_xy, cr_zw)
    rhs2 = bl(x, w) * bl(y, z) - bl(x, z) * bl(y, w)
    r2 = np.abs(lhs2 - rhs2)
    worst = 0.0
    for _ in range(100):
        fr = lorentz.hyperbolic_frame(liealg.adjoint(random_sl2_hyperbolic(rng)))
        v = lorentz.cross(fr.x_minus, fr.x_plus) + lorentz.inner(fr.x_minus, fr.x_plus) * fr.x_zero
        worst = max(worst, float(np.linalg.norm(v)))
    k1, k2 = int(r1.argmax()), int(r2.argmax())
    return [
        Row("cross_product_determinant", float(dets[k1]), float(bl(cr_xy, z)[k1]), float(r1[k1]), tol["lorentz"]),
        Row("cross_product_gram", float(lhs2[k2]), float(rhs2[k2]), float(r2[k2]), tol["lorentz"]),
        Row("null_frame_cross", worst, 0.0, worst, tol["frame"]),
    ]


def iso_suite(hol: Holonomy, rng, tol) -> list[Row]:
    m = isomorphism_matrix(hol)
    det = float(np.linalg.det(m))
    rows = [
        Row("iso_det", abs(det), tol["iso_det"], abs(det), tol["iso_det"], lower_bound=True),
        Row("iso_cond", float(np.linalg.cond(m)), 0.0, 0.0, np.inf),
    ]
    worst = 0.0
    for _ in range(100):
        c = cohomology_coordinates(coboundary(hol, rng.uniform(-1, 1, 3)))
        worst = max(worst, float(np.abs(c).max()))
    rows.append(Row("coboundary_coordinates", worst, 0.0, worst, tol["coboundary"]))
    return rows


def gm_suite(hol: Holonomy, rng, tol, n: int = 50, n_order: int = 10, max_len: int = 5) -> list[Row]:
    """Length derivative against the Margulis invariant, then convergence orders."""
    b = hol.b
    rows = []
    for k in range(n):
        u = phi(hol, random_params(rng, b))
        w = random_word(rng, b, int(rng.integers(1, max_len + 1)))
        d = length_derivative(hol, u, w)
        a = margulis(u, w)
        rows.append(Row(f"gm[{k}] {w}", d, a, abs(d - a), tol["gm"]))
    k = 0
    while k < n_order:
        w = random_word(rng, b, int(rng.integers(2, max_len + 1)))
        if len({abs(x) for x in w.cyclic_reduction()}) < 2:
            continue  # conjugates of powers of one generator: the quotient is exact
        u = phi(hol, random_params(rng, b))
        order = convergence_order(hol, u, w)
        rows.append(Row(f"order[{k}] {w}", order, 2.0, order, tol["order"], lower_bound=True))
        k += 1
    return rows


def twist_suite(hol: Holonomy, rng, tol, grid=(-1.0, -0.5, 0.0, 0.5, 1.0)) -> list[Row]:
    """Length derivative of ``f_l`` against ``alpha_{u0}(f_l) + t_l * pairing`` over a grid of ``t_l``."""
    b = hol.b
    alpha = rng.uniform(-1, 1, b + 1)
    beta = rng.uniform(-1, 1, b - 2)
    rows = []
    for l in range(1, b - 1):
        w = f_word(l, b)
        pairing = twist_pairing(hol, l).value
        base = margulis(base_cocycle(hol, alpha, beta), w)
        for t_l in grid:
            t = np.zeros(b - 2)
            t[l - 1] = t_l
            p = DeformationParams(alpha, beta, t)
            u = phi(hol, p)
            rhs = base + t_l * pairing
            d = length_derivative(hol, u, w)
            rows.append(Row(f"twist l={l} t={t_l:g}", d, rhs, abs(d - rhs), tol["twist"]))
            a = margulis(u, w)
            rows.append(Row(f"twist_margulis l={l} t={t_l:g}", a, rhs, abs(a - rhs), tol["twist_margulis"]))
    return rows


def run(which: str, hol: Holonomy, seed: int, tolerances: dict | None = None) -> list[Row]:
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    names = SUITES if which == "all" else (which,)
    rows: list[Row] = []
    for name in names:
        # one stream per suite, so a suite's rows do not depend on which others ran
        rng = np.random.default_rng([seed, SUITES.index(name)])
        if name == "lorentz":
            rows += lorentz_suite(rng, tol)
        elif name == "iso":
            rows += iso_suite(hol, rng, tol)
        elif name == "gm":
            rows += gm_suite(hol, rng, tol)
        elif name == "twist":
            rows += twist_suite(hol, rng, tol)
        else:
            raise ValueError(f"unknown suite {name!r}")
    return rows
