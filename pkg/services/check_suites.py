"""
Named invariant suites run from the CLI.

Every suite is deterministic (fixed seeds) and reports failures as
CheckResult entries instead of raising.
"""

import logging
import math
import random
from typing import Callable, Dict, List, Tuple

from domain.enums import BraidClass, CheckSuiteName, RepresentationKind
from domain.models import CheckResult, SuiteSummary
from services.braid_core import BraidWord, compose, random_braid
from services.bounds_service import b3_oracle
from services.free_group_fox import (
    artin_image,
    fox_fundamental_residual,
    fox_jacobian_chain,
    fox_matrix,
    random_free_word,
    zeta1_trace_data,
    zeta1_trace_explicit,
)
from services.laurent import LaurentMatrix, LaurentPoly
from services.representations import represent, specialize_fox
from services.spectral_growth import (
    brute_force_partition_count,
    coefficient_bound_check,
    growth_estimate,
    partition_table,
    sine_product,
    torus_sup_sr,
    trace_power_growth,
    vandermonde_root_check,
)

logger = logging.getLogger(__name__)

SUITE_SEED = 20240601
GOLDEN_RATIO_SQUARED = (3 + math.sqrt(5)) / 2
RELATION_KINDS = (RepresentationKind.BURAU, RepresentationKind.LKB, RepresentationKind.FOX)


def _check(name: str, fn: Callable[[], Tuple[bool, str]]) -> CheckResult:
    """Run one check, turning unexpected exceptions into failures."""
    try:
        passed, detail = fn()
    except Exception as e:  # noqa: BLE001
        logger.error("Check %s raised: %s", name, e)
        return CheckResult(name=name, passed=False, detail=f"raised {type(e).__name__}: {e}")
    if not passed:
        logger.warning("Check %s failed: %s", name, detail)
    return CheckResult(name=name, passed=passed, detail=detail)


# ============================================================================
# Relations
# ============================================================================

def _relation_pairs(n: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    pairs = []
    for i in range(1, n - 1):
        pairs.append(((i, i + 1, i), (i + 1, i, i + 1)))
    for i in range(1, n):
        for j in range(i + 2, n):
            pairs.append(((i, j), (j, i)))
    return pairs


def _relations_hold(kind: RepresentationKind, n: int) -> Tuple[bool, str]:
    for left, right in _relation_pairs(n):
        a = represent(kind, BraidWord(n, left)).matrix
        b = represent(kind, BraidWord(n, right)).matrix
        if a != b:
            return False, f"{left} and {right} differ"
    return True, f"{len(_relation_pairs(n))} relations"


def _inverse_law(kind: RepresentationKind, n: int) -> Tuple[bool, str]:
    identity = represent(kind, BraidWord.identity(n)).matrix
    for g in range(1, n):
        if represent(kind, BraidWord(n, (-g, g))).matrix != identity:
            return False, f"generator {g}"
    return True, f"{n - 1} generators"


def _artin_relations(n: int) -> Tuple[bool, str]:
    for left, right in _relation_pairs(n):
        if artin_image(BraidWord(n, left)) != artin_image(BraidWord(n, right)):
            return False, f"{left} and {right} act differently"
    return True, f"{len(_relation_pairs(n))} relations"


def _fox_identity(rng: random.Random) -> Tuple[bool, str]:
    for case in range(200):
        w = random_free_word(rng.randint(1, 4), rng.randint(0, 12), rng)
        if not fox_fundamental_residual(w).is_zero():
            return False, f"case {case}: {w}"
    return True, "200 words"


def _chain_rule(rng: random.Random) -> Tuple[bool, str]:
    for case in range(20):
        a = random_braid(3, rng.randint(0, 6), rng)
        b = random_braid(3, rng.randint(0, 6), rng)
        if fox_matrix(compose(a, b)) != fox_jacobian_chain(a, b):
            return False, f"case {case}: {a.text()} | {b.text()}"
    return True, "20 pairs"


def _specialization_order(rng: random.Random) -> Tuple[bool, str]:
    for case in range(20):
        b = random_braid(3, rng.randint(1, 8), rng)
        group_ring = fox_matrix(b)
        laurent = specialize_fox(b).matrix
        for i in range(3):
            for j in range(3):
                if laurent[i, j].norm() > group_ring[i, j].norm():
                    return False, f"case {case} cell ({i},{j})"
        if group_ring.norm_of_trace() > group_ring.trace_of_norms():
            return False, f"case {case}: group-ring trace order"
        if laurent.norm_of_trace() > laurent.trace_of_norm():
            return False, f"case {case}: Laurent trace order"
    return True, "20 braids"


def _relations_suite() -> List[CheckResult]:
    rng = random.Random(SUITE_SEED)
    results = []
    for kind in RELATION_KINDS:
        for n in range(2, 6):
            results.append(_check(f"{kind.value} relations B_{n}", lambda k=kind, m=n: _relations_hold(k, m)))
    for kind in (RepresentationKind.BURAU, RepresentationKind.LKB):
        for n in range(2, 5):
            results.append(_check(f"{kind.value} inverse law B_{n}", lambda k=kind, m=n: _inverse_law(k, m)))
    for n in range(2, 6):
        results.append(_check(f"artin relations B_{n}", lambda m=n: _artin_relations(m)))
    results.append(_check("fox fundamental identity", lambda: _fox_identity(rng)))
    results.append(_check("fox chain rule", lambda: _chain_rule(rng)))
    results.append(_check("specialization norm order", lambda: _specialization_order(rng)))
    return results


# ============================================================================
# Lemmas
# ============================================================================

def _sine_products() -> Tuple[bool, str]:
    worst = max(abs(sine_product(m) - (m + 1)) for m in range(1, 65))
    return worst < 1e-8, f"max deviation {worst:.3g}"


def _vandermonde() -> Tuple[bool, str]:
    worst = max(vandermonde_root_check(m) for m in range(1, 17))
    return worst < 1e-9, f"max deviation {worst:.3g}"


def random_sparse_poly(rng: random.Random) -> LaurentPoly:
    """Random Laurent polynomial with up to 3 variables and per-variable span <= 6."""
    var_count = rng.randint(1, 3)
    lows = [rng.randint(-3, 0) for _ in range(var_count)]
    terms = []
    for _ in range(rng.randint(1, 12)):
        exponent = tuple(low + rng.randint(0, 6) for low in lows)
        terms.append((exponent, rng.randint(-10, 10)))
    poly = LaurentPoly(var_count, tuple(terms))
    return poly if not poly.is_zero() else LaurentPoly.constant(1, var_count)


def _coefficient_bounds(rng: random.Random) -> Tuple[bool, str]:
    for case in range(100):
        result = coefficient_bound_check(random_sparse_poly(rng))
        if not result.holds:
            return False, f"case {case}: lhs={result.lhs} rhs={result.rhs:.6g}"
    return True, "100 polynomials"


def _partitions() -> Tuple[bool, str]:
    table = partition_table(100)
    counts = [sum(row) for row in table]
    for m in range(1, 21):
        if counts[m] != brute_force_partition_count(m):
            return False, f"S_{m}={counts[m]} differs from enumeration"
    if counts[1] != 1 or counts[4] != 5:
        return False, "small values"
    if any(counts[m + 1] < counts[m] for m in range(1, 100)):
        return False, "S_m not monotone"
    if any(counts[m] > m * max(table[m]) for m in range(1, 101)):
        return False, "S_m exceeds m * max_k S_{m,k}"
    roots = [counts[m] ** (1.0 / m) for m in (40, 60, 80, 100)]
    if roots[-1] >= 1.25 or any(b >= a for a, b in zip(roots, roots[1:])):
        return False, f"roots {roots}"
    return True, f"S_100^(1/100)={roots[-1]:.6f}"


def _lemmas_suite() -> List[CheckResult]:
    rng = random.Random(SUITE_SEED)
    return [
        _check("sine product", _sine_products),
        _check("inverse vandermonde at roots of unity", _vandermonde),
        _check("coefficient bound", lambda: _coefficient_bounds(rng)),
        _check("partition recursion", _partitions),
    ]


# ============================================================================
# Trace growth
# ============================================================================

def _zeta1_growth() -> Tuple[bool, str]:
    rows = zeta1_trace_data(BraidWord(3, (1, -2)), 12)
    values = [row.trace_of_norms for row in rows]
    estimate = growth_estimate(values)
    if abs(estimate.estimate - GOLDEN_RATIO_SQUARED) > 0.10 * GOLDEN_RATIO_SQUARED:
        return False, f"estimate {estimate.estimate:.6f}"
    if any(abs(r - GOLDEN_RATIO_SQUARED) > 0.05 * GOLDEN_RATIO_SQUARED for r in estimate.ratio_estimates[-3:]):
        return False, f"ratios {estimate.ratio_estimates[-3:]}"
    if any(row.norm_of_collected_trace > row.trace_of_norms for row in rows):
        return False, "collected trace exceeds trace of norms"
    return True, f"estimate {estimate.estimate:.6f}"


def _zeta1_paths_agree() -> Tuple[bool, str]:
    b = BraidWord(3, (1, -2))
    fast, explicit = zeta1_trace_data(b, 4), zeta1_trace_explicit(b, 4)
    return fast == explicit, "k <= 4"


def _burau_trace_growth() -> Tuple[bool, str]:
    matrix = represent(RepresentationKind.BURAU, BraidWord(3, (1, -2))).matrix
    growth = trace_power_growth(matrix, 30).norm_of_trace_growth.rate
    sup = torus_sup_sr(matrix, 256, 3).sup_value
    return abs(growth - sup) <= 0.02 * sup, f"growth {growth:.6f} sup {sup:.6f}"


def _triangular_trace_growth() -> Tuple[bool, str]:
    t = LaurentPoly.variable(0, 1)
    matrix = LaurentMatrix.from_rows([[t, 1], [0, 2]])
    growth = trace_power_growth(matrix, 30).norm_of_trace_growth.rate
    sup = torus_sup_sr(matrix, 64, 0).sup_value
    return abs(growth - 2.0) <= 0.04 and abs(sup - 2.0) < 1e-9, f"growth {growth:.6f} sup {sup:.6f}"


def _oracle_sharpness() -> Tuple[bool, str]:
    b = BraidWord(3, (1, -2))
    oracle = b3_oracle(b)
    sup = torus_sup_sr(represent(RepresentationKind.BURAU, b).matrix, 256, 3).sup_value
    ok = oracle.braid_class == BraidClass.PSEUDO_ANOSOV and abs(sup - oracle.dilatation) < 1e-6
    return ok, f"sup {sup:.9f} oracle {oracle.dilatation:.9f}"


def _recover_inequalities(rng: random.Random) -> Tuple[bool, str]:
    checked = 0
    while checked < 5:
        b = random_braid(3, rng.randint(2, 8), rng, reduced=True)
        oracle = b3_oracle(b)
        if oracle.braid_class != BraidClass.PSEUDO_ANOSOV:
            continue
        burau = torus_sup_sr(represent(RepresentationKind.BURAU, b).matrix, 64, 1).sup_value
        lkb = torus_sup_sr(represent(RepresentationKind.LKB, b).matrix, 64, 1).sup_value
        if burau > oracle.dilatation + 1e-6 or lkb > oracle.dilatation ** 2 + 1e-6:
            return False, f"{b.text()}: burau {burau:.6f} lkb {lkb:.6f} lambda {oracle.dilatation:.6f}"
        checked += 1
    return True, "5 pseudo-Anosov braids"


def _theorem1_suite() -> List[CheckResult]:
    rng = random.Random(SUITE_SEED)
    return [
        _check("group-ring trace growth", _zeta1_growth),
        _check("group-ring trace paths agree", _zeta1_paths_agree),
        _check("burau trace growth matches torus sup", _burau_trace_growth),
        _check("triangular trace growth", _triangular_trace_growth),
        _check("oracle sharpness at -1", _oracle_sharpness),
        _check("lower bounds under dilatation", lambda: _recover_inequalities(rng)),
    ]


SUITES: Dict[CheckSuiteName, Callable[[], List[CheckResult]]] = {
    CheckSuiteName.RELATIONS: _relations_suite,
    CheckSuiteName.LEMMAS: _lemmas_suite,
    CheckSuiteName.THEOREM1: _theorem1_suite,
}


def check_suite(name: CheckSuiteName) -> SuiteSummary:
    """
    Run a named suite ("all" runs every suite in order).

    Returns:
        SuiteSummary; passed is True only if every check passed
    """
    name = CheckSuiteName(name)
    if name == CheckSuiteName.ALL:
        checks = [check for suite in SUITES.values() for check in suite()]
    else:
        checks = SUITES[name]()
    passed = all(check.passed for check in checks)
    logger.info("Suite %s: %d checks, passed=%s", name.value, len(checks), passed)
    return SuiteSummary(suite=name, passed=passed, checks=checks)
