"""
Exact multivariate Laurent polynomials over the integers, matrices over them,
and their evaluation on the unit torus.

Exponent vectors are fixed-length integer tuples (entries may be negative);
terms are kept sorted lexicographically so iteration and serialization are
deterministic. Coefficients are Python ints, so powers never overflow.
"""

import logging
import operator
from collections import defaultdict
from dataclasses import dataclass
from functools import reduce
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy

from core.config import settings
from core.errors import DimensionError, DomainError, ModulusError, VarCountMismatchError

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


# ============================================================================
# Unit-torus points
# ============================================================================

def check_unit_point(point: Sequence[complex]) -> None:
    """
    Validate that every coordinate has modulus 1.

    Deviations up to MODULUS_TOL pass silently, up to MODULUS_WARN_TOL pass
    with a warning, anything larger raises.

    Raises:
        ModulusError: If a coordinate is off the unit circle
    """
    for index, value in enumerate(point):
        deviation = abs(abs(value) - 1.0)
        if deviation > settings.MODULUS_WARN_TOL:
            raise ModulusError(
                f"Point coordinate {index} has modulus {abs(value)!r}, expected 1"
            )
        if deviation > settings.MODULUS_TOL:
            logger.warning("Point coordinate %d off the unit circle by %.3g", index, deviation)


# ============================================================================
# Laurent polynomials
# ============================================================================

@dataclass(frozen=True)
class LaurentPoly:
    """A Laurent polynomial in var_count variables with integer coefficients."""

    var_count: int
    terms: Tuple[Tuple[Exponent, int], ...] = ()

    def __post_init__(self):
        if self.var_count < 1:
            raise DomainError("A Laurent polynomial needs at least one variable")
        collected: Dict[Exponent, int] = defaultdict(int)
        for exponent, coeff in self.terms:
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != self.var_count:
                raise VarCountMismatchError(
                    f"Exponent {exponent} does not have length {self.var_count}"
                )
            collected[exponent] += int(coeff)
        canonical = tuple(sorted((e, c) for e, c in collected.items() if c != 0))
        object.__setattr__(self, "terms", canonical)

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_dict(cls, var_count: int, mapping: Mapping[Exponent, int]) -> "LaurentPoly":
        return cls(var_count, tuple(mapping.items()))

    @classmethod
    def zero(cls, var_count: int) -> "LaurentPoly":
        return cls(var_count, ())

    @classmethod
    def constant(cls, value: int, var_count: int = 1) -> "LaurentPoly":
        return cls(var_count, (((0,) * var_count, value),))

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return cls(len(exponent), ((tuple(exponent), coeff),))

    @classmethod
    def variable(cls, index: int, var_count: int = 1, power: int = 1) -> "LaurentPoly":
        """The monomial x_index^power (index is 0-based)."""
        if not 0 <= index < var_count:
            raise DomainError(f"Variable index {index} out of range for {var_count} variables")
        exponent = [0] * var_count
        exponent[index] = power
        return cls.monomial(exponent)

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    def as_dict(self) -> Dict[Exponent, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_one(self) -> bool:
        return self.terms == (((0,) * self.var_count, 1),)

    def coefficient(self, exponent: Sequence[int]) -> int:
        return self.as_dict().get(tuple(exponent), 0)

    def norm(self) -> int:
        """Sum of absolute values of the coefficients."""
        return sum(abs(c) for _, c in self.terms)

    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.var_count
        return tuple(min(e[i] for e, _ in self.terms) for i in range(self.var_count))

    def max_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.var_count
        return tuple(max(e[i] for e, _ in self.terms) for i in range(self.var_count))

    def degree_span(self) -> int:
        """Largest per-variable spread max - min of exponents."""
        if not self.terms:
            return 0
        lows, highs = self.min_exponents(), self.max_exponents()
        return max(h - l for l, h in zip(lows, highs))

    def shift_to_polynomial(self) -> "LaurentPoly":
        """Multiply by the monomial that makes every exponent nonnegative."""
        lows = self.min_exponents()
        return LaurentPoly(
            self.var_count,
            tuple((tuple(e - l for e, l in zip(exp, lows)), c) for exp, c in self.terms),
        )

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _check_compatible(self, other: "LaurentPoly") -> None:
        if self.var_count != other.var_count:
            raise VarCountMismatchError(
                f"Variable counts differ: {self.var_count} vs {other.var_count}"
            )

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.constant(other, self.var_count)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_compatible(other)
        return other

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        merged: Dict[Exponent, int] = defaultdict(int)
        for exponent, coeff in self.terms:
            merged[exponent] += coeff
        for exponent, coeff in other.terms:
            merged[exponent] += coeff
        return LaurentPoly.from_dict(self.var_count, merged)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.var_count, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        product: Dict[Exponent, int] = defaultdict(int)
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                product[tuple(map(operator.add, ea, eb))] += ca * cb
        return LaurentPoly.from_dict(self.var_count, product)

    def __rmul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, factor: int) -> "LaurentPoly":
        return LaurentPoly(self.var_count, tuple((e, c * factor) for e, c in self.terms))

    def __pow__(self, k: int) -> "LaurentPoly":
        return power(self, k)

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------

    def evaluate(self, point: Sequence[complex]) -> complex:
        """Horner-style evaluation at a point of the unit torus."""
        if len(point) != self.var_count:
            raise VarCountMismatchError(
                f"Point has {len(point)} coordinates, polynomial has {self.var_count} variables"
            )
        check_unit_point(point)
        return _horner(list(self.terms), [complex(p) for p in point], 0)

    def evaluate_angles(self, angles: np.ndarray) -> np.ndarray:
        """
        Vectorized evaluation at exp(i * angles).

        Args:
            angles: Array of shape (P, var_count)

        Returns:
            Complex array of shape (P,)
        """
        angles = np.asarray(angles, dtype=float).reshape(-1, self.var_count)
        if not self.terms:
            return np.zeros(angles.shape[0], dtype=complex)
        exponents = np.array([e for e, _ in self.terms], dtype=float)
        coeffs = np.array([float(c) for _, c in self.terms], dtype=float)
        phases = angles @ exponents.T
        return np.exp(1j * phases) @ coeffs

    def substitute_integers(self, values: Sequence[int]) -> int:
        """Exact evaluation at integer units such as t = -1 (values must be +-1)."""
        if len(values) != self.var_count:
            raise VarCountMismatchError("Wrong number of substituted values")
        if any(v not in (1, -1) for v in values):
            raise DomainError("Exact substitution supports only the units +1 and -1")
        total = 0
        for exponent, coeff in self.terms:
            sign = 1
            for value, e in zip(values, exponent):
                if value == -1 and e % 2:
                    sign = -sign
            total += sign * coeff
        return total

    # ------------------------------------------------------------------
    # Conversion
    # ------------------------------------------------------------------

    def to_sympy(self, symbols: Sequence[sympy.Symbol]) -> sympy.Expr:
        return sympy.Add(
            *[
                sympy.Integer(c) * sympy.Mul(*[s ** e for s, e in zip(symbols, exp)])
                for exp, c in self.terms
            ]
        )

    @classmethod
    def from_sympy(cls, expr: sympy.Expr, symbols: Sequence[sympy.Symbol]) -> "LaurentPoly":
        """
        Convert a rational expression whose denominator is a unit monomial.

        Raises:
            DomainError: If the expression is not a Laurent polynomial over Z
        """
        var_count = len(symbols)
        numerator, denominator = sympy.fraction(sympy.cancel(sympy.together(expr)))
        den_terms = sympy.Poly(denominator, *symbols).terms()
        if len(den_terms) != 1:
            raise DomainError(f"Not a Laurent polynomial: denominator {denominator}")
        den_exponent, den_coeff = den_terms[0]

        terms = []
        for exponent, coeff in sympy.Poly(numerator, *symbols).terms():
            if coeff == 0:
                continue
            quotient = sympy.Rational(coeff) / sympy.Rational(den_coeff)
            if not quotient.is_integer:
                raise DomainError(f"Non-integer coefficient {quotient} in {expr}")
            terms.append((tuple(e - d for e, d in zip(exponent, den_exponent)), int(quotient)))
        return cls(var_count, tuple(terms))

    def to_json(self) -> List[dict]:
        """Sorted list of {exponents, coeff} with decimal-string coefficients."""
        return [{"exponents": list(e), "coeff": str(c)} for e, c in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = _variable_names(self.var_count)
        parts = []
        for exponent, coeff in self.terms:
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(names, exponent)
                if e != 0
            ]
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def _variable_names(var_count: int) -> List[str]:
    if var_count == 1:
        return ["t"]
    if var_count == 2:
        return ["q", "t"]
    return [f"x{i + 1}" for i in range(var_count)]


def _horner(terms: List[Tuple[Exponent, int]], point: List[complex], var: int) -> complex:
    if var == len(point):
        return complex(sum(c for _, c in terms))
    groups: Dict[int, List[Tuple[Exponent, int]]] = defaultdict(list)
    for exponent, coeff in terms:
        groups[exponent[var]].append((exponent, coeff))
    x = point[var]
    degrees = sorted(groups, reverse=True)
    value = 0j
    previous = degrees[0]
    for degree in degrees:
        value *= x ** (previous - degree)
        value += _horner(groups[degree], point, var + 1)
        previous = degree
    return value * x ** degrees[-1]


# ============================================================================
# Polynomial operations
# ============================================================================

def add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f + g


def multiply(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def negate(f: LaurentPoly) -> LaurentPoly:
    return -f


def scalar_multiply(f: LaurentPoly, c: int) -> LaurentPoly:
    return f.scale(c)


def power(f: LaurentPoly, k: int) -> LaurentPoly:
    """
    f^k by repeated squaring. Negative k is allowed only for monomials.

    Raises:
        DomainError: If k < 0 and f is not a unit monomial
    """
    if k < 0:
        if not f.is_monomial() or abs(f.terms[0][1]) != 1:
            raise DomainError("Only unit monomials have Laurent inverses")
        exponent, coeff = f.terms[0]
        return LaurentPoly.monomial(tuple(-e for e in exponent), coeff).__pow__(-k)
    result = LaurentPoly.constant(1, f.var_count)
    base = f
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def norm(f: LaurentPoly) -> int:
    return f.norm()


def evaluate(f: LaurentPoly, point: Sequence[complex]) -> complex:
    return f.evaluate(point)


# ============================================================================
# Matrices
# ============================================================================

@dataclass(frozen=True)
class LaurentMatrix:
    """A rectangular matrix of Laurent polynomials sharing var_count."""

    entries: Tuple[Tuple[LaurentPoly, ...], ...]
    var_count: int = 1

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if rows:
            width = len(rows[0])
            for row in rows:
                if len(row) != width:
                    raise DimensionError("Matrix rows have different lengths")
                for entry in row:
                    if entry.var_count != self.var_count:
                        raise VarCountMismatchError(
                            f"Entry has {entry.var_count} variables, matrix has {self.var_count}"
                        )

    @classmethod
    def identity(cls, dim: int, var_count: int = 1) -> "LaurentMatrix":
        one = LaurentPoly.constant(1, var_count)
        zero = LaurentPoly.zero(var_count)
        return cls(
            tuple(tuple(one if i == j else zero for j in range(dim)) for i in range(dim)),
            var_count,
        )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], var_count: int = 1) -> "LaurentMatrix":
        """Build from rows of LaurentPoly or int entries."""
        return cls(
            tuple(
                tuple(
                    entry if isinstance(entry, LaurentPoly) else LaurentPoly.constant(entry, var_count)
                    for entry in row
                )
                for row in rows
            ),
            var_count,
        )

    @property
    def shape(self) -> Tuple[int, int]:
        if not self.entries:
            return (0, 0)
        return (len(self.entries), len(self.entries[0]))

    @property
    def is_square(self) -> bool:
        rows, cols = self.shape
        return rows == cols

    def __getitem__(self, index: Tuple[int, int]) -> LaurentPoly:
        i, j = index
        return self.entries[i][j]

    def _require_square(self, operation: str) -> None:
        if not self.is_square:
            raise DimensionError(f"{operation} requires a square matrix, got {self.shape}")

    def term_count(self) -> int:
        return sum(len(entry.terms) for row in self.entries for entry in row)

    def degree_span(self) -> int:
        """Spread between the largest and smallest exponent over all entries."""
        exponents = [e for row in self.entries for entry in row for exp, _ in entry.terms for e in exp]
        if not exponents:
            return 0
        return max(exponents) - min(exponents)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return matmul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.var_count == other.var_count and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.var_count, self.entries))

    def transpose(self) -> "LaurentMatrix":
        rows, cols = self.shape
        return LaurentMatrix(
            tuple(tuple(self.entries[i][j] for i in range(rows)) for j in range(cols)),
            self.var_count,
        )

    def map_entries(self, fn) -> "LaurentMatrix":
        return LaurentMatrix(tuple(tuple(fn(e) for e in row) for row in self.entries), self.var_count)

    def power(self, k: int) -> "LaurentMatrix":
        self._require_square("power")
        if k < 0:
            return self.inverse().power(-k)
        result = LaurentMatrix.identity(self.shape[0], self.var_count)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def inverse(self) -> "LaurentMatrix":
        """
        Exact inverse over the Laurent polynomial ring.

        Raises:
            DomainError: If the matrix is singular or the inverse is not Laurent
        """
        self._require_square("inverse")
        symbols = sympy.symbols(f"x0:{self.var_count}")
        symbolic = sympy.Matrix(
            [[entry.to_sympy(symbols) for entry in row] for row in self.entries]
        )
        try:
            inverted = symbolic.inv()
        except ValueError as e:
            raise DomainError(f"Matrix is not invertible: {e}")
        dim = self.shape[0]
        return LaurentMatrix(
            tuple(
                tuple(LaurentPoly.from_sympy(inverted[i, j], symbols) for j in range(dim))
                for i in range(dim)
            ),
            self.var_count,
        )

    # ------------------------------------------------------------------
    # Norms and traces
    # ------------------------------------------------------------------

    def trace(self) -> LaurentPoly:
        self._require_square("trace")
        return reduce(
            lambda acc, i: acc + self.entries[i][i],
            range(self.shape[0]),
            LaurentPoly.zero(self.var_count),
        )

    def matrix_norm(self) -> List[List[int]]:
        return [[entry.norm() for entry in row] for row in self.entries]

    def trace_of_norm(self) -> int:
        self._require_square("trace")
        return sum(self.entries[i][i].norm() for i in range(self.shape[0]))

    def norm_of_trace(self) -> int:
        return self.trace().norm()

    def total_norm(self) -> int:
        return sum(entry.norm() for row in self.entries for entry in row)

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------

    def evaluate(self, point: Sequence[complex]) -> np.ndarray:
        check_unit_point(point)
        return np.array(
            [[entry.evaluate(point) for entry in row] for row in self.entries],
            dtype=complex,
        )

    def evaluate_angles(self, angles: np.ndarray) -> np.ndarray:
        """
        Vectorized evaluation at exp(i * angles).

        Args:
            angles: Array of shape (P, var_count)

        Returns:
            Complex array of shape (P, rows, cols)
        """
        angles = np.asarray(angles, dtype=float).reshape(-1, self.var_count)
        rows, cols = self.shape
        out = np.zeros((angles.shape[0], rows, cols), dtype=complex)
        for i in range(rows):
            for j in range(cols):
                entry = self.entries[i][j]
                if not entry.is_zero():
                    out[:, i, j] = entry.evaluate_angles(angles)
        return out

    def substitute_integers(self, values: Sequence[int]) -> List[List[int]]:
        return [[entry.substitute_integers(values) for entry in row] for row in self.entries]

    def to_json(self) -> List[List[List[dict]]]:
        return [[entry.to_json() for entry in row] for row in self.entries]

    def __str__(self) -> str:
        return "[" + ",\n ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries) + "]"


def matmul(a: LaurentMatrix, b: LaurentMatrix) -> LaurentMatrix:
    """Exact matrix product."""
    if a.var_count != b.var_count:
        raise VarCountMismatchError("Matrices have different variable counts")
    rows, inner = a.shape
    inner_b, cols = b.shape
    if inner != inner_b:
        raise DimensionError(f"Cannot multiply {a.shape} by {b.shape}")
    zero = LaurentPoly.zero(a.var_count)
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc: Dict[Exponent, int] = defaultdict(int)
            for k in range(inner):
                left, right = a.entries[i][k], b.entries[k][j]
                if left.is_zero() or right.is_zero():
                    continue
                for ea, ca in left.terms:
                    for eb, cb in right.terms:
                        acc[tuple(map(operator.add, ea, eb))] += ca * cb
            row.append(LaurentPoly.from_dict(a.var_count, acc) if acc else zero)
        out.append(tuple(row))
    return LaurentMatrix(tuple(out), a.var_count)


def matrix_norm(a: LaurentMatrix) -> List[List[int]]:
    return a.matrix_norm()


def trace(a: LaurentMatrix) -> LaurentPoly:
    return a.trace()


def trace_of_norm(a: LaurentMatrix) -> int:
    return a.trace_of_norm()


def norm_of_trace(a: LaurentMatrix) -> int:
    return a.norm_of_trace()


def matrix_eval(a: LaurentMatrix, point: Sequence[complex]) -> np.ndarray:
    return a.evaluate(point)


def product(matrices: Iterable[LaurentMatrix], dim: int, var_count: int) -> LaurentMatrix:
    """Ordered product of matrices, identity when empty."""
    return reduce(matmul, matrices, LaurentMatrix.identity(dim, var_count))


def max_abs_coefficient(a: LaurentMatrix) -> Optional[int]:
    values = [abs(c) for row in a.entries for entry in row for _, c in entry.terms]
    return max(values) if values else None


def coefficient_digits(a: LaurentMatrix) -> int:
    """Decimal digits of the largest coefficient magnitude, 0 for the zero matrix."""
    largest = max_abs_coefficient(a)
    return 0 if not largest else len(str(largest))
