"""Opposite-sign scan of Margulis invariants.

Two elements whose invariants have opposite signs rule out a proper
action.  The scan walks conjugacy classes of the free group on
``g_1 ... g_b`` up to a length bound and reports either the first such pair
or a per-length summary of the invariants it saw.  A sign-consistent
verdict is only a necessary condition for properness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

import numpy as np

from .affine import Cocycle, margulis_many
from .words import Word

ZERO_TOL = 1e-9


class Status(str, Enum):
    NOT_PROPER = "NOT_PROPER"
    SIGN_CONSISTENT = "SIGN_CONSISTENT"


def letter_key(x: int) -> tuple[int, int]:
    """Order ``g1 < g1^-1 < g2 < g2^-1 < ...``."""
    return (abs(x), 0 if x > 0 else 1)


def canonical(w: Word) -> Word:
    """Least rotation of ``w`` or ``w^-1`` under the letter order.

    ``w`` must be cyclically reduced; the result then represents the
    conjugacy classes of both ``w`` and ``w^-1``.
    """
    best = None
    for letters in (w.letters, w.inverse().letters):
        # 2|x| - 1 for g_x and 2|x| for its inverse: the letter order as ints
        keys = [2 * x - 1 if x > 0 else -2 * x for x in letters]
        for k in range(len(letters)):
            cand = keys[k:] + keys[:k]
            if best is None or cand < best[0]:
                best = (cand, letters[k:] + letters[:k])
    return Word(best[1]) if best else Word()


def enumerate_words(b: int, max_len: int) -> Iterator[Word]:
    """Canonical representatives of cyclically reduced words in ``g_1..g_b``.

    One word per class of ``w`` and ``w^-1`` up to rotation, ordered by
    length and then lexicographically in the letter order.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    for n in range(1, max_len + 1):
        yield from _words_of_length(_alphabet(b), n)


def _alphabet(b: int) -> list[int]:
    return sorted((s * i for i in range(1, b + 1) for s in (1, -1)), key=letter_key)


def _words_of_length(alphabet, n) -> Iterator[Word]:
    # A canonical word starts with its least letter, inverses included,
    # so every later letter and its inverse must be no smaller.
    stack = [(x,) for x in reversed(alphabet)]
    while stack:
        prefix = stack.pop()
        if len(prefix) == n:
            if n == 1 or prefix[0] != -prefix[-1]:
                w = Word(prefix)
                if canonical(w).letters == prefix:
                    yield w
            continue
        floor = letter_key(prefix[0])
        for x in reversed(alphabet):
            if x == -prefix[-1]:
                continue
            if letter_key(x) < floor or letter_key(-x) < floor:
                continue
            stack.append(prefix + (x,))


@dataclass(frozen=True)
class Witness:
    first: Word
    first_alpha: float
    second: Word
    second_alpha: float


@dataclass(frozen=True)
class LengthStats:
    length: int
    count: int
    min: float
    max: float
    positive: int
    negative: int
    zero: int


@dataclass(frozen=True)
class ScanVerdict:
    status: Status
    witness: Witness | None
    spectrum: tuple[LengthStats, ...]
    scanned: int
    skipped: int
    max_len: int
    records: tuple[tuple[Word, float], ...] = field(repr=False, default=())

    def __post_init__(self):
        if self.status is Status.NOT_PROPER:
            w = self.witness
            if w is None or not w.first_alpha * w.second_alpha < 0:
                raise ValueError("NOT_PROPER needs a witness with opposite signs")


def _sign(a: float) -> int:
    return 0 if abs(a) <= ZERO_TOL else (1 if a > 0 else -1)


def sign_scan(hol, u: Cocycle, max_len: int) -> ScanVerdict:
    """Scan canonical words up to ``max_len`` for invariants of opposite sign.

    Stops at the first word whose sign is opposite to an earlier one; the
    witness pairs it with the earliest word of the other sign.  Invariants
    with ``|alpha| <= 1e-9`` are sign-neutral.  Words with non-hyperbolic
    image (``|trace| <= 2 + 1e-10`` for the lift) are skipped and counted.
    """
    first_of_sign: dict[int, tuple[Word, float]] = {}
    records: list[tuple[Word, float]] = []
    skipped = 0
    witness = None
    for n in range(1, max_len + 1):
        # one length at a time: batched evaluation, early exit on a witness
        batch = list(_words_of_length(_alphabet(hol.b), n))
        for w, a in zip(batch, margulis_many(u, batch)):
            if np.isnan(a):
                skipped += 1
                continue
            a = float(a)
            records.append((w, a))
            s = _sign(a)
            if s == 0:
                continue
            if -s in first_of_sign:
                other, oa = first_of_sign[-s]
                witness = Witness(other, oa, w, a)
                break
            first_of_sign.setdefault(s, (w, a))
        if witness:
            break
    status = Status.NOT_PROPER if witness else Status.SIGN_CONSISTENT
    return ScanVerdict(
        status, witness, _spectrum(records), len(records), skipped, max_len, tuple(records)
    )


def _spectrum(records) -> tuple[LengthStats, ...]:
    by_len: dict[int, list[float]] = {}
    for w, a in records:
        by_len.setdefault(len(w), []).append(a)
    out = []
    for n in sorted(by_len):
        a = np.array(by_len[n])
        signs = [_sign(x) for x in a]
        out.append(
            LengthStats(
                n, len(a), float(a.min()), float(a.max()),
                signs.count(1), signs.count(-1), signs.count(0),
            )
        )
    return tuple(out)
