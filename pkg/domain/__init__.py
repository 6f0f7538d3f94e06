"""Domain layer for the braid dilatation toolkit."""

from .enums import (
    BraidClass,
    CheckSuiteName,
    GrowthSource,
    OutputFormat,
    RepresentationKind,
)
from .models import (
    AnalyzeOptions,
    BoundReport,
    CheckResult,
    CoefficientBoundResult,
    GrowthEstimate,
    OracleResult,
    SuiteSummary,
    TorusSupResult,
    TracePowerGrowth,
    TraceSandwichResult,
    Zeta1Row,
    Zeta1Summary,
)

__all__ = [
    # Enums
    "BraidClass",
    "CheckSuiteName",
    "GrowthSource",
    "OutputFormat",
    "RepresentationKind",
    # Models
    "AnalyzeOptions",
    "BoundReport",
    "CheckResult",
    "CoefficientBoundResult",
    "GrowthEstimate",
    "OracleResult",
    "SuiteSummary",
    "TorusSupResult",
    "TracePowerGrowth",
    "TraceSandwichResult",
    "Zeta1Row",
    "Zeta1Summary",
]
