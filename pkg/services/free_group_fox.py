"""
Free groups, the Artin action of braids, Fox derivatives and the group ring
of the mapping-torus group Gamma = <F_n, z | z g = f(g) z>.

The automorphism of a braid word g1...gk is beta_{g1} o ... o beta_{gk}, so
the images of ab are beta_a applied to the images of b. With that order the
Fox chain rule reads

    J_ab[i][j] = sum_k a(J_b[k][j]) * J_a[i][k]

which is what ``fox_jacobian_chain`` computes. The factor order only matters
before abelianization.
"""

import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.config import settings
from core.errors import (
    DimensionError,
    DomainError,
    GeneratorIndexError,
    ResourceGuardError,
    StrandCountMismatchError,
)
from domain.models import Zeta1Row
from services.braid_core import BraidWord, free_reduce_letters, inverse, power
from services.laurent import LaurentPoly

logger = logging.getLogger(__name__)

Letters = Tuple[int, ...]


# ============================================================================
# Free words
# ============================================================================

@dataclass(frozen=True, order=True)
class FreeWord:
    """A freely reduced word over x_1..x_n (negative letters are inverses)."""

    n: int
    letters: Letters = ()

    def __post_init__(self):
        if self.n < 1:
            raise GeneratorIndexError("A free group needs at least one generator")
        for g in self.letters:
            if g == 0 or abs(g) > self.n:
                raise GeneratorIndexError(f"Generator {g} out of range 1..{self.n}")
        object.__setattr__(self, "letters", free_reduce_letters(self.letters))

    @classmethod
    def identity(cls, n: int) -> "FreeWord":
        return cls(n, ())

    @classmethod
    def generator(cls, n: int, i: int) -> "FreeWord":
        return cls(n, (i,))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if self.n != other.n:
            raise StrandCountMismatchError(f"Words over F_{self.n} and F_{other.n}")
        return FreeWord(self.n, self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.n, tuple(-g for g in reversed(self.letters)))

    def exponent_sum(self) -> int:
        return sum(1 if g > 0 else -1 for g in self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(f"x{g}" if g > 0 else f"x{-g}^-1" for g in self.letters)


def _substitute(images: Sequence[Letters], letters: Letters) -> Letters:
    """Replace x_g by images[g-1] (inverted for negative letters) and reduce."""
    out: List[int] = []
    for g in letters:
        image = images[g - 1] if g > 0 else tuple(-h for h in reversed(images[-g - 1]))
        for h in image:
            if out and out[-1] == -h:
                out.pop()
            else:
                out.append(h)
    return tuple(out)


def _generator_images(n: int, letter: int) -> List[Letters]:
    """Images of x_1..x_n under a single Artin generator or its inverse."""
    images: List[Letters] = [(j,) for j in range(1, n + 1)]
    i = abs(letter)
    if letter > 0:
        images[i - 1] = (i, i + 1, -i)
        images[i] = (i,)
    else:
        images[i - 1] = (i + 1,)
        images[i] = (-(i + 1), i, i + 1)
    return images


def _artin_letters(b: BraidWord) -> List[Letters]:
    current: List[Letters] = [(j,) for j in range(1, b.n + 1)]
    for letter in b.letters:
        generator = _generator_images(b.n, letter)
        current = [_substitute(current, image) for image in generator]
    return current


def artin_image(b: BraidWord) -> List[FreeWord]:
    """
    Images of x_1..x_n under the Artin automorphism of b.

    Args:
        b: Braid word in B_n

    Returns:
        n freely reduced words
    """
    return [FreeWord(b.n, letters) for letters in _artin_letters(b)]


def apply_automorphism(images: Sequence[FreeWord], w: FreeWord) -> FreeWord:
    """Substitute generator images into w."""
    if len(images) != w.n:
        raise StrandCountMismatchError(f"{len(images)} images for a word over F_{w.n}")
    return FreeWord(w.n, _substitute([image.letters for image in images], w.letters))


def random_free_word(n: int, length: int, rng: random.Random) -> FreeWord:
    """Random freely reduced word of exactly the given length."""
    letters: List[int] = []
    while len(letters) < length:
        g = rng.randint(1, n) * rng.choice((1, -1))
        if letters and letters[-1] == -g:
            continue
        letters.append(g)
    return FreeWord(n, tuple(letters))


# ============================================================================
# Group ring of Gamma
# ============================================================================

@dataclass(frozen=True, order=True)
class GammaElement:
    """The element z^z_exp * word of Gamma, ordered by (z_exp, word)."""

    z_exp: int
    word: FreeWord

    def __str__(self) -> str:
        if self.z_exp == 0:
            return str(self.word)
        prefix = "z" if self.z_exp == 1 else f"z^{self.z_exp}"
        return prefix if not self.word.letters else f"{prefix}*{self.word}"


@dataclass
class BraidAutomorphism:
    """The Artin automorphism f of a braid, with cached powers f^b."""

    braid: BraidWord
    _powers: Dict[int, List[Letters]] = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.braid.n

    def power_images(self, exponent: int) -> List[Letters]:
        """Images of the generators under f^exponent (inverse braid for exponent < 0)."""
        if exponent not in self._powers:
            source = self.braid if exponent >= 0 else inverse(self.braid)
            self._powers[exponent] = _artin_letters(power(source, abs(exponent)))
        return self._powers[exponent]

    def apply(self, w: FreeWord, exponent: int = 1) -> FreeWord:
        if exponent == 0:
            return w
        return FreeWord(w.n, _substitute(self.power_images(exponent), w.letters))


@dataclass(frozen=True)
class GroupRingElement:
    """A finite Z-linear combination of Gamma elements, canonically collected."""

    n: int
    terms: Tuple[Tuple[GammaElement, int], ...] = ()

    def __post_init__(self):
        collected: Dict[GammaElement, int] = defaultdict(int)
        for element, coeff in self.terms:
            if element.word.n != self.n:
                raise StrandCountMismatchError(
                    f"Element over F_{element.word.n} in a ring over F_{self.n}"
                )
            collected[element] += int(coeff)
        object.__setattr__(
            self, "terms", tuple(sorted((e, c) for e, c in collected.items() if c != 0))
        )

    @classmethod
    def from_dict(cls, n: int, mapping: Dict[GammaElement, int]) -> "GroupRingElement":
        return cls(n, tuple(mapping.items()))

    @classmethod
    def zero(cls, n: int) -> "GroupRingElement":
        return cls(n, ())

    @classmethod
    def one(cls, n: int) -> "GroupRingElement":
        return cls.of_word(FreeWord.identity(n))

    @classmethod
    def of_word(cls, w: FreeWord, coeff: int = 1, z_exp: int = 0) -> "GroupRingElement":
        return cls(w.n, ((GammaElement(z_exp, w), coeff),))

    def as_dict(self) -> Dict[GammaElement, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def norm(self) -> int:
        return sum(abs(c) for _, c in self.terms)

    def has_z(self) -> bool:
        return any(element.z_exp != 0 for element, _ in self.terms)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        if self.n != other.n:
            raise StrandCountMismatchError("Group ring elements over different free groups")
        return GroupRingElement(self.n, self.terms + other.terms)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.n, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def scale(self, factor: int) -> "GroupRingElement":
        return GroupRingElement(self.n, tuple((e, c * factor) for e, c in self.terms))

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        return multiply(self, other)

    def twist(self, z_exp: int) -> "GroupRingElement":
        """Tag every term with z^z_exp on the left."""
        return GroupRingElement(
            self.n, tuple((GammaElement(z_exp + e.z_exp, e.word), c) for e, c in self.terms)
        )

    def apply(self, images: Sequence[FreeWord]) -> "GroupRingElement":
        """Apply a free-group endomorphism to every word, keeping z exponents."""
        return GroupRingElement(
            self.n,
            tuple(
                (GammaElement(e.z_exp, apply_automorphism(images, e.word)), c)
                for e, c in self.terms
            ),
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for element, coeff in self.terms:
            body = str(element)
            if coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def multiply(
    u: GroupRingElement,
    v: GroupRingElement,
    action: Optional[BraidAutomorphism] = None,
) -> GroupRingElement:
    """
    Product in Z[Gamma] using (z^a u)(z^b v) = z^{a+b} f^b(u) v.

    Args:
        u: Left factor
        v: Right factor
        action: Artin automorphism f; needed only when v carries powers of z

    Raises:
        DomainError: If v has z-powers and no action was given
    """
    if u.n != v.n:
        raise StrandCountMismatchError("Group ring elements over different free groups")
    if action is None and v.has_z():
        raise DomainError("Multiplying by z-powers needs the braid automorphism")

    product: Dict[GammaElement, int] = defaultdict(int)
    for left, cl in u.terms:
        for right, cr in v.terms:
            moved = left.word if right.z_exp == 0 else action.apply(left.word, right.z_exp)
            word = FreeWord(u.n, moved.letters + right.word.letters)
            product[GammaElement(left.z_exp + right.z_exp, word)] += cl * cr
    return GroupRingElement.from_dict(u.n, product)


def norm(u: GroupRingElement) -> int:
    """Sum of absolute coefficients after canonical collection."""
    return u.norm()


def abelianize(u: GroupRingElement) -> LaurentPoly:
    """Ring map x_j -> t, z -> 1 into univariate Laurent polynomials."""
    mapping: Dict[Tuple[int], int] = defaultdict(int)
    for element, coeff in u.terms:
        mapping[(element.word.exponent_sum(),)] += coeff
    return LaurentPoly.from_dict(1, mapping)


# ============================================================================
# Matrices over the group ring
# ============================================================================

@dataclass(frozen=True)
class GroupRingMatrix:
    """A rectangular matrix of group ring elements over F_n."""

    n: int
    entries: Tuple[Tuple[GroupRingElement, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise DimensionError("Group ring matrix rows have different lengths")

    @classmethod
    def identity(cls, n: int, dim: Optional[int] = None) -> "GroupRingMatrix":
        dim = n if dim is None else dim
        one, zero = GroupRingElement.one(n), GroupRingElement.zero(n)
        return cls(n, tuple(tuple(one if i == j else zero for j in range(dim)) for i in range(dim)))

    @property
    def dims(self) -> Tuple[int, int]:
        if not self.entries:
            return (0, 0)
        return (len(self.entries), len(self.entries[0]))

    def __getitem__(self, index: Tuple[int, int]) -> GroupRingElement:
        i, j = index
        return self.entries[i][j]

    def _require_square(self) -> None:
        rows, cols = self.dims
        if rows != cols:
            raise DimensionError(f"Trace requires a square matrix, got {self.dims}")

    def diagonal(self) -> List[GroupRingElement]:
        self._require_square()
        return [self.entries[i][i] for i in range(self.dims[0])]

    def trace(self) -> GroupRingElement:
        total = GroupRingElement.zero(self.n)
        for entry in self.diagonal():
            total = total + entry
        return total

    def trace_of_norms(self) -> int:
        return sum(entry.norm() for entry in self.diagonal())

    def norm_of_trace(self) -> int:
        return self.trace().norm()

    def twist(self, z_exp: int) -> "GroupRingMatrix":
        return GroupRingMatrix(
            self.n, tuple(tuple(e.twist(z_exp) for e in row) for row in self.entries)
        )

    def apply(self, images: Sequence[FreeWord]) -> "GroupRingMatrix":
        """Apply a free-group endomorphism entrywise."""
        return GroupRingMatrix(
            self.n, tuple(tuple(e.apply(images) for e in row) for row in self.entries)
        )

    def matmul(
        self, other: "GroupRingMatrix", action: Optional[BraidAutomorphism] = None
    ) -> "GroupRingMatrix":
        rows, inner = self.dims
        inner_other, cols = other.dims
        if inner != inner_other:
            raise DimensionError(f"Cannot multiply {self.dims} by {other.dims}")
        out = []
        for i in range(rows):
            row = []
            for j in range(cols):
                acc = GroupRingElement.zero(self.n)
                for k in range(inner):
                    acc = acc + multiply(self.entries[i][k], other.entries[k][j], action)
                row.append(acc)
            out.append(tuple(row))
        return GroupRingMatrix(self.n, tuple(out))

    def abelianize(self) -> List[List[LaurentPoly]]:
        return [[abelianize(e) for e in row] for row in self.entries]


# ============================================================================
# Fox calculus
# ============================================================================

def fox_derivative(w: FreeWord, i: int) -> GroupRingElement:
    """
    Fox derivative of w with respect to x_i.

    Each occurrence of x_i contributes its prefix, each occurrence of x_i^-1
    contributes minus the prefix that includes it. Prefixes of a reduced word
    never coincide across these two cases, so the norm equals the number of
    occurrences of x_i^{+-1}.

    Raises:
        GeneratorIndexError: If i is outside 1..n
    """
    if not 1 <= i <= w.n:
        raise GeneratorIndexError(f"Generator index {i} out of range 1..{w.n}")
    terms: Dict[GammaElement, int] = defaultdict(int)
    for position, g in enumerate(w.letters):
        if g == i:
            terms[GammaElement(0, FreeWord(w.n, w.letters[:position]))] += 1
        elif g == -i:
            terms[GammaElement(0, FreeWord(w.n, w.letters[: position + 1]))] -= 1
    return GroupRingElement.from_dict(w.n, terms)


def fox_matrix(b: BraidWord) -> GroupRingMatrix:
    """n x n matrix with entry (i, j) = d(artin_image(b)_j)/dx_i."""
    images = artin_image(b)
    return GroupRingMatrix(
        b.n,
        tuple(
            tuple(fox_derivative(images[j], i + 1) for j in range(b.n))
            for i in range(b.n)
        ),
    )


def fox_jacobian_chain(a: BraidWord, b: BraidWord) -> GroupRingMatrix:
    """
    Composed form of fox_matrix(ab) from the two factors.

    Entry (i, j) is sum_k a(J_b[k][j]) * J_a[i][k], with a applied to words.
    """
    if a.n != b.n:
        raise StrandCountMismatchError(f"Cannot chain B_{a.n} with B_{b.n}")
    images_a = artin_image(a)
    jacobian_a = fox_matrix(a)
    moved_b = fox_matrix(b).apply(images_a)
    n = a.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = GroupRingElement.zero(n)
            for k in range(n):
                acc = acc + multiply(moved_b[k, j], jacobian_a[i, k])
            row.append(acc)
        out.append(tuple(row))
    return GroupRingMatrix(n, tuple(out))


def fox_fundamental_residual(w: FreeWord) -> GroupRingElement:
    """sum_i (dw/dx_i)(x_i - 1) - (w - 1); zero for every word."""
    one = GroupRingElement.one(w.n)
    total = GroupRingElement.zero(w.n)
    for i in range(1, w.n + 1):
        generator = GroupRingElement.of_word(FreeWord.generator(w.n, i))
        total = total + multiply(fox_derivative(w, i), generator - one)
    return total - (GroupRingElement.of_word(w) - one)


# ============================================================================
# Trace data of the twisted Fox matrix
# ============================================================================

def _common_prefix(a: Letters, b: Letters) -> int:
    limit = min(len(a), len(b))
    i = 0
    while i < limit and a[i] == b[i]:
        i += 1
    return i


def _diagonal_row(k: int, diagonal: Sequence[Letters], term_cap: int) -> Zeta1Row:
    """
    Trace data from the diagonal words D_i = beta^k(x_i).

    The (i, i) entry is the Fox derivative of D_i by x_i; its terms are
    signed prefixes of D_i. Prefixes of different D_i are equal exactly when
    they have the same length and that length is within their common prefix.
    """
    n = len(diagonal)
    by_length: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    term_count = 0
    for i, word in enumerate(diagonal, start=1):
        for position, g in enumerate(word):
            if g == i:
                by_length[position].append((i - 1, 1))
            elif g == -i:
                by_length[position + 1].append((i - 1, -1))
            else:
                continue
            term_count += 1
        if term_count > term_cap:
            raise ResourceGuardError(
                f"Trace of beta^{k} has more than {term_cap} terms; lower kmax or raise TERM_CAP"
            )

    lcp = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            lcp[a][b] = lcp[b][a] = _common_prefix(diagonal[a], diagonal[b])

    collected_norm = 0
    support = 0
    for length, entries in by_length.items():
        if len(entries) == 1:
            collected_norm += 1
            support += 1
            continue
        groups: List[List[int]] = []  # [representative index, coefficient]
        for index, sign in entries:
            for group in groups:
                if length <= lcp[group[0]][index]:
                    group[1] += sign
                    break
            else:
                groups.append([index, sign])
        for _, coeff in groups:
            if coeff:
                collected_norm += abs(coeff)
                support += 1

    return Zeta1Row(
        k=k,
        trace_of_norms=term_count,
        norm_of_collected_trace=collected_norm,
        support_size=support,
    )


def zeta1_trace_data(
    b: BraidWord,
    kmax: int,
    term_cap: Optional[int] = None,
) -> List[Zeta1Row]:
    """
    Trace data of the z^k-twisted Fox matrix of b^k for k = 1..kmax.

    trace_of_norms is sum_i ||(M_k)_ii|| and norm_of_collected_trace is the
    norm of sum_i (M_k)_ii with equal Gamma elements collected word-wise.

    Args:
        b: Braid word
        kmax: Largest power, at least 1
        term_cap: Term guard (defaults to TERM_CAP)

    Raises:
        DomainError: If kmax < 1
        ResourceGuardError: If a trace or a diagonal word exceeds the cap
    """
    if kmax < 1:
        raise DomainError(f"kmax must be at least 1 (got {kmax})")
    cap = settings.TERM_CAP if term_cap is None else term_cap

    base = _artin_letters(b)
    current = base
    rows: List[Zeta1Row] = []
    for k in range(1, kmax + 1):
        if k > 1:
            current = [_substitute(current, image) for image in base]
        longest = max(len(word) for word in current)
        if longest > cap:
            raise ResourceGuardError(
                f"Image of beta^{k} has a word of {longest} letters, above cap {cap}"
            )
        rows.append(_diagonal_row(k, [current[i] for i in range(b.n)], cap))
        logger.debug(
            "zeta1 k=%d: trace_of_norms=%d collected=%d",
            k,
            rows[-1].trace_of_norms,
            rows[-1].norm_of_collected_trace,
        )
    return rows


def zeta1_trace_explicit(b: BraidWord, kmax: int) -> List[Zeta1Row]:
    """Same data as zeta1_trace_data by building each twisted Fox matrix."""
    if kmax < 1:
        raise DomainError(f"kmax must be at least 1 (got {kmax})")
    rows = []
    for k in range(1, kmax + 1):
        trace = fox_matrix(power(b, k)).twist(k)
        collected = trace.trace()
        rows.append(
            Zeta1Row(
                k=k,
                trace_of_norms=trace.trace_of_norms(),
                norm_of_collected_trace=collected.norm(),
                support_size=len(collected.terms),
            )
        )
    return rows
