"""
Laurent-matrix representations of braids.

Reduced Burau (variable t, dimension n-1), Lawrence-Krammer-Bigelow
(variables q, t, dimension n(n-1)/2) and the abelianized Fox matrix
(variable t, dimension n, the unreduced Burau matrix). The image of a word is
the product of its generator matrices in letter order.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Tuple

from core.errors import DomainError
from domain.enums import RepresentationKind
from services.braid_core import BraidWord
from services.free_group_fox import fox_matrix
from services.laurent import LaurentMatrix, LaurentPoly, product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RepMatrixBundle:
    """A braid together with its image under one representation."""

    kind: RepresentationKind
    matrix: LaurentMatrix
    braid: BraidWord

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def var_count(self) -> int:
        return self.matrix.var_count

    @property
    def variables(self) -> List[str]:
        return ["q", "t"] if self.kind == RepresentationKind.LKB else ["t"]


# ============================================================================
# Dimensions
# ============================================================================

def dim_basis(n: int, m: int) -> int:
    """
    Size of the basis of the m-th group-ring representation: C(n+m-2, m).

    Raises:
        DomainError: If n < 2 or m < 0
    """
    if n < 2 or m < 0:
        raise DomainError(f"dim_basis needs n >= 2 and m >= 0 (got n={n}, m={m})")
    return math.comb(n + m - 2, m)


def expected_dim(kind: RepresentationKind, n: int) -> int:
    if kind == RepresentationKind.BURAU:
        return n - 1
    if kind == RepresentationKind.LKB:
        return n * (n - 1) // 2
    return n


# ============================================================================
# Generator matrices
# ============================================================================

def _burau_generator(n: int, i: int) -> LaurentMatrix:
    t = LaurentPoly.variable(0, 1)
    dim = n - 1
    rows: List[List] = [[1 if r == c else 0 for c in range(dim)] for r in range(dim)]
    r = i - 1
    rows[r][r] = -t
    if i - 1 >= 1:
        rows[r][r - 1] = t
    if i + 1 <= n - 1:
        rows[r][r + 1] = 1
    return LaurentMatrix.from_rows(rows, 1)


def lkb_basis(n: int) -> List[Tuple[int, int]]:
    """Basis pairs (j, k), 1 <= j < k <= n, in lexicographic order."""
    return list(combinations(range(1, n + 1), 2))


def _lkb_generator(n: int, i: int) -> LaurentMatrix:
    """
    Columns are the images sigma_i v_{j,k}:

        v_{j,k}                                       i not in {j-1, j, k-1, k}
        q v_{i,k} + (q^2-q) v_{i,j} + (1-q) v_{j,k}   i = j-1
        v_{j+1,k}                                     i = j != k-1
        q v_{j,i} + (1-q) v_{j,k} - (q^2-q) t v_{i,k} i = k-1 != j
        v_{j,k+1}                                     i = k
        -t q^2 v_{j,k}                                i = j = k-1
    """
    q = LaurentPoly.variable(0, 2)
    t = LaurentPoly.variable(1, 2)
    one = LaurentPoly.constant(1, 2)
    zero = LaurentPoly.zero(2)
    basis = lkb_basis(n)
    index: Dict[Tuple[int, int], int] = {pair: pos for pos, pair in enumerate(basis)}
    dim = len(basis)
    columns: List[Dict[int, LaurentPoly]] = []

    for j, k in basis:
        image: Dict[Tuple[int, int], LaurentPoly] = {}
        if i == j - 1:
            image[(i, k)] = q
            image[(i, j)] = q * q - q
            image[(j, k)] = one - q
        elif i == j and i != k - 1:
            image[(j + 1, k)] = one
        elif i == k - 1 and i != j:
            image[(j, i)] = q
            image[(j, k)] = one - q
            image[(i, k)] = -((q * q - q) * t)
        elif i == k:
            image[(j, k + 1)] = one
        elif i == j and i == k - 1:
            image[(j, k)] = -(t * q * q)
        else:
            image[(j, k)] = one
        columns.append({index[pair]: value for pair, value in image.items()})

    rows = tuple(
        tuple(columns[c].get(r, zero) for c in range(dim)) for r in range(dim)
    )
    return LaurentMatrix(rows, 2)


def _exact_inverse(matrix: LaurentMatrix) -> LaurentMatrix:
    """Invert only the block that differs from the identity."""
    dim = matrix.shape[0]
    identity = LaurentMatrix.identity(dim, matrix.var_count)
    active = [
        r
        for r in range(dim)
        if any(
            matrix[r, c] != identity[r, c] or matrix[c, r] != identity[c, r]
            for c in range(dim)
        )
    ]
    if not active:
        return identity
    block = LaurentMatrix(
        tuple(tuple(matrix[r, c] for c in active) for r in active), matrix.var_count
    ).inverse()
    position = {r: pos for pos, r in enumerate(active)}
    rows = []
    for r in range(dim):
        row = []
        for c in range(dim):
            if r in position and c in position:
                row.append(block[position[r], position[c]])
            else:
                row.append(identity[r, c])
        rows.append(tuple(row))
    return LaurentMatrix(tuple(rows), matrix.var_count)


@lru_cache(maxsize=None)
def generator_matrix(kind: RepresentationKind, n: int, letter: int) -> LaurentMatrix:
    """
    Exact image of a single letter (negative letters are inverses).

    Raises:
        DomainError: For the fox kind, which has no fixed generator matrices
    """
    kind = RepresentationKind(kind)
    if n < 2 or letter == 0 or abs(letter) > n - 1:
        raise DomainError(f"Letter {letter} is not a generator of B_{n}")
    if kind == RepresentationKind.BURAU:
        positive = _burau_generator(n, abs(letter))
    elif kind == RepresentationKind.LKB:
        positive = _lkb_generator(n, abs(letter))
    else:
        raise DomainError("Fox specialization is computed from the Fox matrix, not per letter")
    if letter > 0:
        return positive
    logger.debug("Inverting %s generator %d for B_%d", kind.value, -letter, n)
    return _exact_inverse(positive)


def _word_product(kind: RepresentationKind, b: BraidWord, var_count: int) -> LaurentMatrix:
    dim = expected_dim(kind, b.n)
    return product((generator_matrix(kind, b.n, g) for g in b.letters), dim, var_count)


# ============================================================================
# Representations
# ============================================================================

def burau_reduced(b: BraidWord) -> RepMatrixBundle:
    """Reduced Burau matrix of b over Z[t, t^-1]."""
    matrix = _word_product(RepresentationKind.BURAU, b, 1)
    return RepMatrixBundle(RepresentationKind.BURAU, matrix, b)


def lkb_matrix(b: BraidWord) -> RepMatrixBundle:
    """Lawrence-Krammer-Bigelow matrix of b over Z[q^+-1, t^+-1]."""
    matrix = _word_product(RepresentationKind.LKB, b, 2)
    return RepMatrixBundle(RepresentationKind.LKB, matrix, b)


def specialize_fox(b: BraidWord) -> RepMatrixBundle:
    """Fox matrix of b under x_j -> t (unreduced Burau)."""
    rows = fox_matrix(b).abelianize()
    matrix = LaurentMatrix(tuple(tuple(row) for row in rows), 1)
    return RepMatrixBundle(RepresentationKind.FOX, matrix, b)


def burau_transpose_variant(b: BraidWord) -> RepMatrixBundle:
    """
    Transposed reduced Burau matrix with t -> t^-1.

    On the unit circle this is the transpose of the conjugate matrix, so
    spectral radii agree pointwise with burau_reduced at the conjugate point.
    """
    matrix = burau_reduced(b).matrix.transpose().map_entries(_invert_variables)
    return RepMatrixBundle(RepresentationKind.BURAU, matrix, b)


def _invert_variables(f: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(f.var_count, tuple((tuple(-e for e in exp), c) for exp, c in f.terms))


def represent(kind: RepresentationKind, b: BraidWord) -> RepMatrixBundle:
    """Dispatch on the representation kind."""
    kind = RepresentationKind(kind)
    if kind == RepresentationKind.BURAU:
        return burau_reduced(b)
    if kind == RepresentationKind.LKB:
        return lkb_matrix(b)
    return specialize_fox(b)
