"""JSON and CSV writers for CLI reports.

Keys are emitted in a fixed order and floats are rounded to
REPORT_SIG_DIGITS significant digits so reports are byte-identical across
runs. Integers beyond the exact float range are written as decimal strings.
"""

import csv
import io
import json
from typing import Any, Dict, List, Optional, Sequence

from core.config import settings
from domain.models import BoundReport, GrowthEstimate, SuiteSummary, TracePowerGrowth, Zeta1Row
from services.representations import RepMatrixBundle

EXACT_INT_LIMIT = 2 ** 53
# Unit-circle coordinates below this are floating-point residue of cos and sin.
UNIT_NOISE = 1e-12


# ============================================================================
# Scalars
# ============================================================================

def round_sig(value: Optional[float], digits: Optional[int] = None) -> Optional[float]:
    """Round to a number of significant digits (None passes through)."""
    if value is None:
        return None
    digits = settings.REPORT_SIG_DIGITS if digits is None else digits
    rounded = float(f"{value:.{digits}g}")
    return 0.0 if rounded == 0 else rounded


def int_json(value: int) -> Any:
    return value if abs(value) < EXACT_INT_LIMIT else str(value)


def complex_json(value: Optional[complex]) -> Optional[Dict[str, float]]:
    if value is None:
        return None
    parts = [0.0 if abs(part) < UNIT_NOISE else part for part in (value.real, value.imag)]
    return {"re": round_sig(parts[0]), "im": round_sig(parts[1])}


def growth_json(estimate: GrowthEstimate) -> Dict[str, Any]:
    return {
        "estimate": round_sig(estimate.estimate),
        "fit_estimate": round_sig(estimate.fit_estimate),
        "rate": round_sig(estimate.rate),
        "window": estimate.window,
        "root_estimates": [round_sig(r) for r in estimate.root_estimates],
        "ratio_estimates": [round_sig(r) for r in estimate.ratio_estimates],
    }


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


# ============================================================================
# Reports
# ============================================================================

def report_json(report: BoundReport) -> Dict[str, Any]:
    """Bound report in the stable schema order."""
    burau = None
    if report.burau_bound is not None:
        burau = {
            "sup": round_sig(report.burau_bound),
            "argmax_t": complex_json(report.burau_argmax_t),
        }
    lkb = None
    if report.lkb_sup is not None:
        lkb = {"sup": round_sig(report.lkb_sup), "bound": round_sig(report.lkb_bound)}

    sharpness = None
    if report.sharp_at_minus1 is not None:
        sharpness = {"at_minus1": report.sharp_at_minus1, "gap": round_sig(report.sharpness_gap)}

    oracle = None
    if report.oracle is not None:
        oracle = {
            "class": report.oracle.braid_class.value,
            "dilatation": round_sig(report.oracle.dilatation),
        }

    zeta1 = None
    if report.zeta1_growth is not None:
        summary = report.zeta1_growth
        zeta1 = {
            "k_values": summary.k_values,
            "trace_of_norms": [int_json(v) for v in summary.trace_of_norms],
            "norm_of_collected_trace": [int_json(v) for v in summary.norm_of_collected_trace],
            "growth_estimate": growth_json(summary.growth),
        }

    timings = None
    if report.timings_ms is not None:
        timings = {name: round(ms, 3) for name, ms in report.timings_ms.items()}

    return {
        "schema_version": settings.SCHEMA_VERSION,
        "braid": report.braid,
        "n": report.n,
        "bounds": {"direction": "lower_bound", "burau": burau, "lkb": lkb},
        "sharpness": sharpness,
        "oracle": oracle,
        "zeta1": zeta1,
        "timings_ms": timings,
        "errors": dict(sorted(report.errors.items())),
    }


def rep_json(bundle: RepMatrixBundle, power: int = 1) -> Dict[str, Any]:
    return {
        "schema_version": settings.SCHEMA_VERSION,
        "kind": bundle.kind.value,
        "n": bundle.braid.n,
        "braid": bundle.braid.text(),
        "power": power,
        "variables": bundle.variables,
        "dim": bundle.dim,
        "matrix": [
            [[{"exponents": list(e), "coeff": str(c)} for e, c in entry.terms] for entry in row]
            for row in bundle.matrix.entries
        ],
    }


def rep_csv(bundle: RepMatrixBundle) -> str:
    """One row per nonzero term: row,col,exponents,coeff (exponents ';'-joined)."""
    rows = [["row", "col", "exponents", "coeff"]]
    for i, row in enumerate(bundle.matrix.entries):
        for j, entry in enumerate(row):
            for exponent, coeff in entry.terms:
                rows.append([i, j, ";".join(str(e) for e in exponent), coeff])
    return _csv(rows)


def zeta1_growth_json(braid: str, n: int, rows: Sequence[Zeta1Row], estimate: GrowthEstimate) -> Dict[str, Any]:
    return {
        "schema_version": settings.SCHEMA_VERSION,
        "kind": "zeta1",
        "braid": braid,
        "n": n,
        "k_values": [row.k for row in rows],
        "trace_of_norms": [int_json(row.trace_of_norms) for row in rows],
        "norm_of_collected_trace": [int_json(row.norm_of_collected_trace) for row in rows],
        "support_size": [row.support_size for row in rows],
        "growth_estimate": growth_json(estimate),
    }


def zeta1_growth_csv(rows: Sequence[Zeta1Row]) -> str:
    table: List[List[Any]] = [["k", "trace_of_norms", "norm_of_collected_trace", "support_size"]]
    table.extend([row.k, row.trace_of_norms, row.norm_of_collected_trace, row.support_size] for row in rows)
    return _csv(table)


def trace_growth_json(kind: str, braid: str, n: int, growth: TracePowerGrowth) -> Dict[str, Any]:
    return {
        "schema_version": settings.SCHEMA_VERSION,
        "kind": kind,
        "braid": braid,
        "n": n,
        "k_values": list(range(1, len(growth.norm_of_trace_seq) + 1)),
        "norm_of_trace": [int_json(v) for v in growth.norm_of_trace_seq],
        "trace_of_norm": [int_json(v) for v in growth.trace_of_norm_seq],
        "total_norm": [int_json(v) for v in growth.total_norm_seq],
        "growth_estimate": {
            "norm_of_trace": growth_json(growth.norm_of_trace_growth),
            "trace_of_norm": growth_json(growth.trace_of_norm_growth),
            "total_norm": growth_json(growth.total_norm_growth),
        },
    }


def trace_growth_csv(growth: TracePowerGrowth) -> str:
    table: List[List[Any]] = [["k", "norm_of_trace", "trace_of_norm", "total_norm"]]
    for k, values in enumerate(
        zip(growth.norm_of_trace_seq, growth.trace_of_norm_seq, growth.total_norm_seq), start=1
    ):
        table.append([k, *values])
    return _csv(table)


def suite_json(summary: SuiteSummary) -> Dict[str, Any]:
    return {
        "suite": summary.suite.value,
        "passed": summary.passed,
        "checks": [
            {"name": check.name, "passed": check.passed, "detail": check.detail}
            for check in summary.checks
        ],
    }


def _csv(rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()
