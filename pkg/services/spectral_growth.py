"""
Spectral radii on the unit torus, growth rates of sequences and the
supporting counting and coefficient lemmas.

Torus scans probe the angles 2*pi*j/grid (so t = -1 is on-grid whenever the
grid is even) and refine around the incumbent. The scan is a lower bound of
the true supremum; nothing here certifies a global maximum.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from core.config import settings
from core.errors import DimensionError, DomainError, ResourceGuardError
from core.parallel import parallel_map
from domain.models import (
    CoefficientBoundResult,
    GrowthEstimate,
    TorusSupResult,
    TracePowerGrowth,
    TraceSandwichResult,
)
from services.laurent import LaurentMatrix, LaurentPoly, coefficient_digits

logger = logging.getLogger(__name__)

Number = Union[int, float]

MAX_SPECTRAL_DIM = 64
MAX_TORUS_VARS = 3
MIN_GRID = 8
SCAN_CHUNK = 4096
REFINE_FACTOR = 4
REFINE_HALF_WIDTH = 8
GRID_SUP_SLACK = 1.02
MIN_GROWTH_LENGTH = 3
BOUNDED_FIT_TOLERANCE = 1e-9


# ============================================================================
# Spectral radius
# ============================================================================

def spectral_radius(matrix) -> float:
    """
    Largest eigenvalue modulus of a square complex matrix.

    Raises:
        DimensionError: If the matrix is not square or larger than 64 x 64
        DomainError: If an entry is not finite
    """
    array = np.asarray(matrix, dtype=complex)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
        raise DimensionError(f"Spectral radius needs a nonempty square matrix, got {array.shape}")
    if array.shape[0] > MAX_SPECTRAL_DIM:
        raise DimensionError(f"Dimension {array.shape[0]} exceeds {MAX_SPECTRAL_DIM}")
    if not np.all(np.isfinite(array)):
        raise DomainError("Matrix has non-finite entries")
    return float(np.max(np.abs(np.linalg.eigvals(array))))


def _batched_spectral_radius(stack: np.ndarray) -> np.ndarray:
    return np.max(np.abs(np.linalg.eigvals(stack)), axis=1)


# ============================================================================
# Torus supremum
# ============================================================================

def _scan_chunk(args: Tuple[LaurentMatrix, int, int, int]) -> Tuple[float, int]:
    """Best value and its flat grid index inside [start, stop)."""
    matrix, grid, start, stop = args
    flat = np.arange(start, stop)
    indices = np.stack(np.unravel_index(flat, (grid,) * matrix.var_count), axis=1)
    angles = 2.0 * np.pi * indices / grid
    radii = _batched_spectral_radius(matrix.evaluate_angles(angles))
    best = int(np.argmax(radii))
    return float(radii[best]), start + best


def torus_sup_sr(
    matrix: LaurentMatrix,
    grid: Optional[int] = None,
    refine_rounds: Optional[int] = None,
    workers: Optional[int] = None,
) -> TorusSupResult:
    """
    Grid-and-refine supremum of the spectral radius over the unit torus.

    Each refinement round shrinks the step by 4 and probes +-8 new steps
    (+-2 previous steps) per variable around the incumbent, which only moves
    on strict improvement. Ties on the grid go to the lexicographically
    smallest index.

    Args:
        matrix: Square Laurent matrix with at most 3 variables
        grid: Points per variable (defaults to TORUS_GRID)
        refine_rounds: Refinement rounds (defaults to TORUS_REFINE)
        workers: Thread count for the grid scan

    Returns:
        TorusSupResult (a lower bound of the true supremum)

    Raises:
        DimensionError: If the matrix is not square
        DomainError: If grid < 8 or there are more than 3 variables
        ResourceGuardError: If grid^var_count exceeds TORUS_POINT_CAP
    """
    grid = settings.TORUS_GRID if grid is None else grid
    refine_rounds = settings.TORUS_REFINE if refine_rounds is None else refine_rounds
    if not matrix.is_square or matrix.shape[0] == 0:
        raise DimensionError(f"Torus scan needs a square matrix, got {matrix.shape}")
    if grid < MIN_GRID:
        raise DomainError(f"Grid must be at least {MIN_GRID} (got {grid})")
    if refine_rounds < 0:
        raise DomainError("refine_rounds must be nonnegative")
    var_count = matrix.var_count
    if var_count > MAX_TORUS_VARS:
        raise DomainError(f"Torus scans support at most {MAX_TORUS_VARS} variables")
    total = grid ** var_count
    if total > settings.TORUS_POINT_CAP:
        raise ResourceGuardError(
            f"Torus grid of {total} points exceeds TORUS_POINT_CAP={settings.TORUS_POINT_CAP}"
        )

    logger.debug("Torus scan: dim=%d vars=%d grid=%d", matrix.shape[0], var_count, grid)
    chunks = [(matrix, grid, start, min(start + SCAN_CHUNK, total)) for start in range(0, total, SCAN_CHUNK)]
    best_value, best_index = -1.0, 0
    for value, index in parallel_map(_scan_chunk, chunks, workers):
        if value > best_value:
            best_value, best_index = value, index

    best_angles = 2.0 * np.pi * np.array(np.unravel_index(best_index, (grid,) * var_count), dtype=float) / grid
    probed = total

    step = 2.0 * np.pi / grid
    offsets = np.arange(-REFINE_HALF_WIDTH, REFINE_HALF_WIDTH + 1)
    for round_index in range(refine_rounds):
        step /= REFINE_FACTOR
        mesh = np.meshgrid(*([offsets] * var_count), indexing="ij")
        local = np.stack([m.ravel() for m in mesh], axis=1) * step + best_angles
        radii = _batched_spectral_radius(matrix.evaluate_angles(local))
        candidate = int(np.argmax(radii))
        probed += len(local)
        if radii[candidate] > best_value:
            best_value = float(radii[candidate])
            best_angles = local[candidate]
        logger.debug("Refine round %d: sup=%.12g", round_index + 1, best_value)

    return TorusSupResult(
        sup_value=best_value,
        argmax_angles=[float(a) for a in best_angles],
        grid=grid,
        refine_rounds=refine_rounds,
        points_probed=probed,
    )


def refined_step(grid: int, refine_rounds: int) -> float:
    """Angular step after the last refinement round."""
    return 2.0 * math.pi / grid / (REFINE_FACTOR ** refine_rounds)


# ============================================================================
# Growth estimates
# ============================================================================

def _fit_growth(values: Sequence[Number]) -> Optional[float]:
    """exp of the k-slope of log a_k ~ c + k log g + p log k over the trailing half."""
    count = len(values)
    points = [
        (k, math.log(a))
        for k, a in enumerate(values, start=1)
        if k > count // 2 and a > 0
    ]
    if len(points) < 3:
        return None
    ks = np.array([k for k, _ in points], dtype=float)
    logs = np.array([v for _, v in points], dtype=float)
    design = np.stack([np.ones_like(ks), ks, np.log(ks)], axis=1)
    solution, *_ = np.linalg.lstsq(design, logs, rcond=None)
    return float(math.exp(solution[1]))


def growth_estimate(seq: Sequence[Number], window: Optional[int] = None) -> GrowthEstimate:
    """
    Finite-k proxy for max(1, limsup a_k^{1/k}).

    The estimate is exactly 1 for bounded sequences: those whose log-linear
    fit has slope <= 0, or, when the sequence is too short to fit, those that
    never increase across the window. Constant traces such as those of the
    identity fall in this case.

    Args:
        seq: Nonnegative values a_1..a_K (exact integers allowed), K >= 3
        window: Trailing indices used for the maximum (default ceil(K/3))

    Returns:
        GrowthEstimate with root and ratio diagnostics

    Raises:
        DomainError: On fewer than 3 values, negative values or a bad window
    """
    values = list(seq)
    if not values:
        raise DomainError("Growth estimate of an empty sequence")
    if len(values) < MIN_GROWTH_LENGTH:
        raise DomainError(f"Growth estimates need at least {MIN_GROWTH_LENGTH} values (got {len(values)})")
    if any(a < 0 for a in values):
        raise DomainError("Growth estimates need nonnegative values")
    count = len(values)
    window = math.ceil(count / 3) if window is None else window
    if not 1 <= window <= count:
        raise DomainError(f"Window {window} outside 1..{count}")

    roots = [0.0 if a == 0 else math.exp(math.log(a) / k) for k, a in enumerate(values, start=1)]
    ratios = [
        float(nxt / cur)
        for cur, nxt in zip(values, values[1:])
        if cur != 0 and nxt != 0
    ]
    fit = _fit_growth(values)
    if fit is not None:
        bounded = fit <= 1.0 + BOUNDED_FIT_TOLERANCE
    else:
        tail = values[-(window + 1):]
        bounded = all(nxt <= cur for cur, nxt in zip(tail, tail[1:]))
    estimate = 1.0 if bounded else max(1.0, max(roots[-window:]))
    return GrowthEstimate(
        values=values,
        root_estimates=roots,
        ratio_estimates=ratios,
        estimate=estimate,
        window=window,
        fit_estimate=fit,
    )


def trace_power_growth(
    matrix: LaurentMatrix,
    kmax: Optional[int] = None,
    window: Optional[int] = None,
    term_cap: Optional[int] = None,
) -> TracePowerGrowth:
    """
    Exact sequences ||tr A^k||, tr||A^k|| and sum_ij ||(A^k)_ij|| for k = 1..kmax.

    Raises:
        DimensionError: If A is not square
        DomainError: If kmax < 3
        ResourceGuardError: If A^k has more than term_cap terms
    """
    kmax = settings.KMAX if kmax is None else kmax
    cap = settings.TERM_CAP if term_cap is None else term_cap
    if not matrix.is_square:
        raise DimensionError(f"Trace powers need a square matrix, got {matrix.shape}")
    if kmax < MIN_GROWTH_LENGTH:
        raise DomainError(f"kmax must be at least {MIN_GROWTH_LENGTH} (got {kmax})")

    norm_of_trace: List[int] = []
    trace_of_norm: List[int] = []
    total_norm: List[int] = []
    current = matrix
    for k in range(1, kmax + 1):
        if k > 1:
            current = current @ matrix
        terms = current.term_count()
        if terms > cap:
            raise ResourceGuardError(f"A^{k} has {terms} terms, above cap {cap}")
        norm_of_trace.append(current.norm_of_trace())
        trace_of_norm.append(current.trace_of_norm())
        total_norm.append(current.total_norm())
    logger.debug(
        "Trace powers up to k=%d, final term count %d, largest coefficient %d digits",
        kmax,
        current.term_count(),
        coefficient_digits(current),
    )

    return TracePowerGrowth(
        norm_of_trace_seq=norm_of_trace,
        trace_of_norm_seq=trace_of_norm,
        total_norm_seq=total_norm,
        norm_of_trace_growth=growth_estimate(norm_of_trace, window),
        trace_of_norm_growth=growth_estimate(trace_of_norm, window),
        total_norm_growth=growth_estimate(total_norm, window),
    )


# ============================================================================
# Partition counts
# ============================================================================

def partition_table(m: int) -> List[List[int]]:
    """
    Table S[j][k] for 0 <= j, k <= m: partitions of j with largest part k.

    Uses S_{j+1,k+1} = S_{j,k} + S_{j-k,k+1} with S_{0,0} = 1.
    """
    if m < 0:
        raise DomainError("Partition tables need m >= 0")
    table = [[0] * (m + 1) for _ in range(m + 1)]
    table[0][0] = 1
    for j in range(1, m + 1):
        for k in range(1, j + 1):
            table[j][k] = table[j - 1][k - 1] + (table[j - k][k] if j - k >= 0 else 0)
    return table


def partition_count(m: int) -> int:
    """S_m, the number of tuples (n_1..n_m) with sum i*n_i = m."""
    if m < 1:
        raise DomainError(f"partition_count needs m >= 1 (got {m})")
    return sum(partition_table(m)[m])


def brute_force_partition_count(m: int) -> int:
    """Count (n_1..n_m) with sum i*n_i = m by direct enumeration."""

    def count(remaining: int, part: int) -> int:
        if remaining == 0:
            return 1
        if part == 0:
            return 0
        return sum(count(remaining - used * part, part - 1) for used in range(remaining // part + 1))

    return count(m, m)


# ============================================================================
# Coefficient lemmas
# ============================================================================

def sine_product(m: int) -> float:
    """prod_{k=1}^{M} 2 sin(k pi / (M+1)), which equals M+1."""
    if m < 1:
        raise DomainError(f"sine_product needs M >= 1 (got {m})")
    return float(np.prod([2.0 * math.sin(k * math.pi / (m + 1)) for k in range(1, m + 1)]))


def _grid_sup_abs(f: LaurentPoly, grid: int) -> float:
    total = grid ** f.var_count
    if total > settings.TORUS_POINT_CAP:
        raise ResourceGuardError(f"Grid of {total} points exceeds TORUS_POINT_CAP")
    best = 0.0
    for start in range(0, total, SCAN_CHUNK):
        flat = np.arange(start, min(start + SCAN_CHUNK, total))
        indices = np.stack(np.unravel_index(flat, (grid,) * f.var_count), axis=1)
        values = np.abs(f.evaluate_angles(2.0 * np.pi * indices / grid))
        best = max(best, float(values.max()))
    return best


def coefficient_bound_check(f: LaurentPoly, grid: Optional[int] = None) -> CoefficientBoundResult:
    """
    Check ||f|| <= (M+1)^v * sup_grid |f| * 1.02.

    M is the largest per-variable degree span and v the variable count; f
    is shifted to polynomial form first, which leaves the norm unchanged.

    Raises:
        DomainError: If grid < 8(M+1)
    """
    shifted = f.shift_to_polynomial()
    span = shifted.degree_span()
    minimum = MIN_GRID * (span + 1)
    grid = minimum if grid is None else grid
    if grid < minimum:
        raise DomainError(f"Grid {grid} too small for degree span {span}; need >= {minimum}")
    sup = _grid_sup_abs(shifted, grid)
    lhs = shifted.norm()
    rhs = (span + 1) ** shifted.var_count * sup * GRID_SUP_SLACK
    return CoefficientBoundResult(
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs,
        degree_span=span,
        var_count=shifted.var_count,
    )


def trace_sandwich_check(matrix: LaurentMatrix, k: int, grid: Optional[int] = None) -> TraceSandwichResult:
    """
    Two-sided estimate sup|tr A^k| <= ||tr A^k|| <= (k*span+1)^v * sup|tr A^k| * 1.02.

    span is the exponent spread of A over all entries and variables.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    trace = matrix.power(k).trace()
    span = matrix.degree_span()
    minimum = MIN_GRID * (trace.degree_span() + 1)
    grid = max(minimum, grid or 0)
    lower = _grid_sup_abs(trace, grid)
    value = trace.norm()
    upper = (k * span + 1) ** matrix.var_count * lower * GRID_SUP_SLACK
    return TraceSandwichResult(
        k=k,
        lower=lower,
        norm=value,
        upper=upper,
        holds=lower <= value + 1e-9 and value <= upper,
    )


def _root_vandermonde(m: int) -> np.ndarray:
    nodes = np.exp(2j * np.pi * np.arange(m + 1) / (m + 1))
    return np.vander(nodes, m + 1, increasing=True)


def vandermonde_root_check(m: int) -> float:
    """
    Max deviation of |v_ij| from 1/(M+1) for the inverse Vandermonde matrix
    at the (M+1)-th roots of unity.
    """
    if m < 1:
        raise DomainError(f"M must be at least 1 (got {m})")
    inverse = np.linalg.inv(_root_vandermonde(m))
    return float(np.max(np.abs(np.abs(inverse) - 1.0 / (m + 1))))


def coefficients_from_unit_samples(values: Sequence[complex]) -> List[complex]:
    """Coefficients a_0..a_M of a polynomial from its values at the (M+1)-th roots of unity."""
    if len(values) < 2:
        raise DomainError("Need at least two samples")
    m = len(values) - 1
    solution = np.linalg.solve(_root_vandermonde(m), np.asarray(values, dtype=complex))
    return [complex(c) for c in solution]


def sample_at_unit_roots(f: LaurentPoly) -> List[complex]:
    """Values of a univariate polynomial at the (deg+1)-th roots of unity."""
    if f.var_count != 1:
        raise DomainError("Unit-root sampling is univariate")
    shifted = f.shift_to_polynomial()
    m = max(shifted.max_exponents()[0], 1)
    angles = 2.0 * np.pi * np.arange(m + 1) / (m + 1)
    return [complex(v) for v in shifted.evaluate_angles(angles.reshape(-1, 1))]
