"""
Dilatation bounds for braids: Burau and LKB torus suprema, sharpness at
t = -1, the B_3 trace oracle and the group-ring trace growth summary.
"""

import logging
import math
import time
from contextlib import contextmanager
from typing import Dict, Iterator, Optional

from core.config import settings
from core.errors import BraidDilatationError, NotApplicableError, ResourceGuardError
from domain.enums import BraidClass
from domain.models import AnalyzeOptions, BoundReport, OracleResult, Zeta1Summary
from services.braid_core import BraidWord
from services.free_group_fox import zeta1_trace_data
from services.representations import burau_reduced, lkb_matrix
from services.spectral_growth import growth_estimate, spectral_radius, torus_sup_sr

logger = logging.getLogger(__name__)


# ============================================================================
# B_3 oracle
# ============================================================================

def b3_oracle(b: BraidWord) -> OracleResult:
    """
    Classify a 3-braid from its reduced Burau matrix M at t = -1.

    |tr M| < 2 is periodic, |tr M| = 2 is reducible unless M = +-I (then
    periodic), |tr M| > 2 is pseudo-Anosov with dilatation the larger root
    of x^2 - |tr M| x + det M.

    Raises:
        NotApplicableError: If b is not a 3-braid
    """
    if b.n != 3:
        raise NotApplicableError(f"The trace oracle only covers B_3 (got B_{b.n})")
    m = burau_reduced(b).matrix.substitute_integers([-1])
    trace = m[0][0] + m[1][1]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]

    if abs(trace) < 2:
        return OracleResult(braid_class=BraidClass.PERIODIC, trace=trace)
    if abs(trace) == 2:
        scalar = m[0][1] == 0 and m[1][0] == 0 and m[0][0] == m[1][1]
        braid_class = BraidClass.PERIODIC if scalar else BraidClass.REDUCIBLE
        return OracleResult(braid_class=braid_class, trace=trace)
    dilatation = (abs(trace) + math.sqrt(trace * trace - 4 * det)) / 2
    return OracleResult(
        braid_class=BraidClass.PSEUDO_ANOSOV,
        trace=trace,
        dilatation=dilatation,
    )


# ============================================================================
# Group-ring growth
# ============================================================================

def zeta1_summary(b: BraidWord, kmax: Optional[int] = None) -> Zeta1Summary:
    """Trace-of-norms sequence of the twisted Fox matrix with its growth estimate."""
    kmax = settings.KMAX if kmax is None else kmax
    rows = zeta1_trace_data(b, kmax)
    trace_of_norms = [row.trace_of_norms for row in rows]
    return Zeta1Summary(
        k_values=[row.k for row in rows],
        trace_of_norms=trace_of_norms,
        norm_of_collected_trace=[row.norm_of_collected_trace for row in rows],
        growth=growth_estimate(trace_of_norms),
    )


# ============================================================================
# Analysis pipeline
# ============================================================================

class _StageRunner:
    """Runs named stages, recording failures and optional wall-clock timings."""

    def __init__(self, timings: bool):
        self.errors: Dict[str, str] = {}
        self.timings: Optional[Dict[str, float]] = {} if timings else None

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        started = time.perf_counter()
        logger.debug("Stage %s started", name)
        try:
            yield
        except ResourceGuardError:
            logger.warning("Stage %s tripped a resource guard", name)
            raise
        except BraidDilatationError as e:
            logger.error("Stage %s failed: %s", name, e)
            self.errors[name] = str(e)
        finally:
            if self.timings is not None:
                self.timings[name] = (time.perf_counter() - started) * 1000.0
            logger.debug("Stage %s finished", name)


def analyze(
    b: BraidWord,
    opts: Optional[AnalyzeOptions] = None,
    workers: Optional[int] = None,
) -> BoundReport:
    """
    Compute dilatation lower bounds for a braid.

    A failing stage leaves its fields empty and records the message under
    ``errors``; the other stages still run. Resource guards abort the run.

    Args:
        b: Braid word
        opts: Grid, refinement and stage switches
        workers: Thread count for torus scans

    Returns:
        BoundReport (burau_bound <= lambda, lkb_sup <= lambda^2)
    """
    opts = opts or AnalyzeOptions()
    runner = _StageRunner(opts.timings)
    fields: Dict[str, object] = {}

    with runner.stage("burau"):
        matrix = burau_reduced(b).matrix
        sup = torus_sup_sr(matrix, opts.grid, opts.refine, workers)
        at_minus1 = spectral_radius(matrix.substitute_integers([-1]))
        gap = sup.sup_value - at_minus1
        sharp = abs(gap) < settings.SHARPNESS_TOL
        fields.update(
            burau_bound=sup.sup_value,
            burau_argmax_t=sup.argmax[0],
            burau_at_minus1=at_minus1,
            sharp_at_minus1=sharp,
            sharpness_gap=gap,
        )

    if opts.with_lkb:
        with runner.stage("lkb"):
            lkb = torus_sup_sr(lkb_matrix(b).matrix, opts.grid, opts.refine, workers)
            fields.update(
                lkb_sup=lkb.sup_value,
                lkb_bound=math.sqrt(lkb.sup_value),
                lkb_argmax=lkb.argmax,
            )

    if b.n == 3:
        with runner.stage("oracle"):
            fields["oracle"] = b3_oracle(b)

    if opts.with_zeta1:
        with runner.stage("zeta1"):
            fields["zeta1_growth"] = zeta1_summary(b, opts.kmax)

    return BoundReport(
        braid=b.text(),
        n=b.n,
        errors=runner.errors,
        timings_ms=runner.timings,
        **fields,
    )
