"""
Braid words in B_n with word-level group operations and induced permutations.

Letters are nonzero integers: g > 0 is sigma_g, g < 0 is sigma_{|g|}^{-1}.
Words are never rewritten with braid relations; only free reduction is done.

Permutation convention: letters act left-to-right on strand positions and
``Permutation.compose`` is diagrammatic, ``p.compose(q)(i) == q(p(i))``.
With it, ``permutation(compose(a, b)) == permutation(b).compose(permutation(a))``.
"""

import logging
import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from core.errors import BraidParseError, BraidRangeError, StrandCountMismatchError

logger = logging.getLogger(__name__)


# ============================================================================
# Free reduction
# ============================================================================

def free_reduce_letters(letters: Sequence[int]) -> Tuple[int, ...]:
    """Cancel adjacent (g, -g) pairs until none remain."""
    stack: List[int] = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


# ============================================================================
# Types
# ============================================================================

@dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators of B_n."""

    n: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise BraidRangeError(f"Strand count must be at least 2 (got {self.n})")
        object.__setattr__(self, "letters", tuple(int(g) for g in self.letters))
        for g in self.letters:
            if g == 0 or abs(g) > self.n - 1:
                raise BraidRangeError(
                    f"Generator {g} out of range for B_{self.n} (need 1 <= |g| <= {self.n - 1})"
                )

    @classmethod
    def identity(cls, n: int) -> "BraidWord":
        """The empty word."""
        return cls(n, ())

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def is_freely_reduced(self) -> bool:
        return all(a != -b for a, b in zip(self.letters, self.letters[1:]))

    def text(self) -> str:
        """Render in the comma-separated text format."""
        return ",".join(str(g) for g in self.letters)

    def __str__(self) -> str:
        return f"B_{self.n}[{self.text()}]"


@dataclass(frozen=True)
class Permutation:
    """A permutation of 1..n stored as its list of images."""

    images: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"Not a permutation of 1..{len(self.images)}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """Diagrammatic composition: apply self first, then other."""
        if other.n != self.n:
            raise StrandCountMismatchError("Permutations act on different sets")
        return Permutation(tuple(other(self(i)) for i in range(1, self.n + 1)))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest element."""
        seen = set()
        result = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return result


# ============================================================================
# Operations
# ============================================================================

def parse_braid(text: str, n: int) -> BraidWord:
    """
    Parse the "g1,g2,...,gk" text format.

    Args:
        text: Comma-separated signed integers; empty string is the identity
        n: Strand count

    Returns:
        BraidWord without free reduction

    Raises:
        BraidParseError: On a malformed token
        BraidRangeError: On a letter with |g| >= n or g == 0
    """
    stripped = text.strip()
    if not stripped:
        return BraidWord.identity(n)

    letters = []
    for position, token in enumerate(stripped.split(",")):
        token = token.strip()
        try:
            letters.append(int(token))
        except ValueError:
            raise BraidParseError(f"Malformed token {token!r} at position {position + 1}")
    return BraidWord(n, tuple(letters))


def free_reduce(a: BraidWord) -> BraidWord:
    return BraidWord(a.n, free_reduce_letters(a.letters))


def compose(a: BraidWord, b: BraidWord) -> BraidWord:
    """Concatenate and freely reduce."""
    if a.n != b.n:
        raise StrandCountMismatchError(f"Cannot compose B_{a.n} with B_{b.n}")
    return BraidWord(a.n, free_reduce_letters(a.letters + b.letters))


def inverse(a: BraidWord) -> BraidWord:
    return BraidWord(a.n, tuple(-g for g in reversed(a.letters)))


def power(a: BraidWord, k: int) -> BraidWord:
    """Concatenate k copies (inverse copies for k < 0) without reduction."""
    if k < 0:
        return power(inverse(a), -k)
    return BraidWord(a.n, a.letters * k)


def permutation(a: BraidWord) -> Permutation:
    """
    Induced permutation of strand positions.

    images[i-1] is the starting position of the strand that ends at
    position i, i.e. the product s_{g1} s_{g2} ... s_{gk} of transpositions
    evaluated right to left.
    """
    images = list(range(1, a.n + 1))
    for g in reversed(a.letters):
        i = abs(g)
        images = [_swap(value, i) for value in images]
    return Permutation(tuple(images))


def _swap(value: int, i: int) -> int:
    if value == i:
        return i + 1
    if value == i + 1:
        return i
    return value


def exponent_sum(a: BraidWord) -> int:
    return sum(1 if g > 0 else -1 for g in a.letters)


def random_braid(n: int, length: int, rng: random.Random, reduced: bool = False) -> BraidWord:
    """
    Draw a random word with letters uniform in +-1..+-(n-1).

    Args:
        n: Strand count
        length: Number of letters
        rng: Seeded random source
        reduced: If True, redraw letters that would cancel the previous one
    """
    letters: List[int] = []
    while len(letters) < length:
        g = rng.randint(1, n - 1) * rng.choice((1, -1))
        if reduced and letters and letters[-1] == -g:
            continue
        letters.append(g)
    return BraidWord(n, tuple(letters))
