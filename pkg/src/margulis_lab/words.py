"""Reduced words in the free generators ``g_1 ... g_{b+1}``.

A letter is a nonzero int: ``+i`` stands for ``g_i`` and ``-i`` for its
inverse.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        x = int(x)
        if x == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True, init=False)
class Word:
    letters: tuple[int, ...]

    def __init__(self, letters: Iterable[int] = ()):
        object.__setattr__(self, "letters", reduce_letters(letters))

    @classmethod
    def gen(cls, i: int, exponent: int = 1) -> "Word":
        if exponent == 0:
            return cls()
        s = 1 if exponent > 0 else -1
        return cls([s * i] * abs(exponent))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Word":
        return cls(i * e for i, e in pairs)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"g1 g2^-1 g3"``; the empty string (or ``"1"``) is the identity."""
        letters = []
        for tok in text.replace("*", " ").split():
            if tok in ("1", "e", "id"):
                continue
            base, _, exp = tok.partition("^")
            if not base.startswith("g"):
                raise ValueError(f"cannot parse letter {tok!r}")
            i = int(base[1:])
            letters.extend([i if int(exp or 1) > 0 else -i] * abs(int(exp or 1)))
        return cls(letters)

    def pairs(self) -> list[tuple[int, int]]:
        return [(abs(x), 1 if x > 0 else -1) for x in self.letters]

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def max_index(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def cyclic_reduction(self) -> "Word":
        """Strip matching ``x ... x^-1`` letters from the two ends (a conjugate of ``self``)."""
        letters = self.letters
        i, j = 0, len(letters)
        while j - i >= 2 and letters[i] == -letters[j - 1]:
            i, j = i + 1, j - 1
        return Word(letters[i:j])

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"g{x}" if x > 0 else f"g{-x}^-1" for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"
