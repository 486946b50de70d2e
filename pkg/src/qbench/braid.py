"""Braid words on n strands as signed generator sequences.

Text format: whitespace-separated nonzero integers, ``+i`` for the
crossing sigma_i and ``-i`` for its inverse. ``"1 -2 1"`` is a word in B_3.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ParseError


class ClosureKind(enum.Enum):
    TRACE = "trace"
    PLAT = "plat"

    def validate(self, strands: int) -> None:
        if self is ClosureKind.PLAT and strands % 2:
            raise ContractError(f"plat closure needs an even strand count, got {strands}")


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(g) for g in self.letters))
        if self.strands < 1:
            raise ContractError(f"a braid needs at least one strand, got {self.strands}")
        for g in self.letters:
            if g == 0 or abs(g) >= self.strands:
                raise ContractError(f"generator {g} is not valid in B_{self.strands}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_braid(self)

    def __add__(self, other: BraidWord) -> BraidWord:
        return concat(self, other)


def parse_braid(text: str, strands: int | None = None) -> BraidWord:
    """Parse ``text`` into a braid; strand count defaults to ``max|g| + 1``."""
    letters = []
    for pos, token in enumerate(text.split()):
        try:
            g = int(token)
        except ValueError:
            raise ParseError(f"not an integer: {token!r}", pos) from None
        if g == 0:
            raise ParseError("0 is not a braid generator", pos)
        if strands is not None and abs(g) >= strands:
            raise ParseError(f"generator {g} needs more than {strands} strands", pos)
        letters.append(g)
    if strands is None:
        strands = max((abs(g) for g in letters), default=0) + 1
    return BraidWord(strands, tuple(letters))


def format_braid(b: BraidWord) -> str:
    return " ".join(str(g) for g in b.letters)


def writhe(b: BraidWord) -> int:
    """Exponent sum; equals the writhe of the co-oriented trace closure."""
    return sum(1 if g > 0 else -1 for g in b.letters)


def inverse(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands, tuple(-g for g in reversed(b.letters)))


def concat(a: BraidWord, b: BraidWord) -> BraidWord:
    if a.strands != b.strands:
        raise ContractError(f"cannot concatenate braids on {a.strands} and {b.strands} strands")
    return BraidWord(a.strands, a.letters + b.letters)


def stabilize(b: BraidWord, sign: int = 1) -> BraidWord:
    """Markov move II: add a strand and append ``sigma_n^{±1}``."""
    n = b.strands
    return BraidWord(n + 1, b.letters + ((n if sign > 0 else -n),))


def random_braid(strands: int, length: int, rng: np.random.Generator) -> BraidWord:
    if strands < 2:
        return BraidWord(strands, ())
    gens = rng.integers(1, strands, size=length)
    signs = rng.choice([-1, 1], size=length)
    return BraidWord(strands, tuple(int(g * s) for g, s in zip(gens, signs)))
