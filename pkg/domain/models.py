"""Domain models using Pydantic v2 for the braid dilatation toolkit."""

import cmath
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.config import settings
from .enums import BraidClass, CheckSuiteName

Number = Union[int, float]


class GrowthEstimate(BaseModel):
    """Finite-k estimate of the growth rate max(1, limsup a_k^{1/k})."""

    values: List[Number] = Field(..., description="Input sequence a_1..a_K")
    root_estimates: List[float] = Field(..., description="a_k^{1/k} per k")
    ratio_estimates: List[float] = Field(
        default_factory=list,
        description="a_{k+1}/a_k for consecutive nonzero pairs",
    )
    estimate: float = Field(..., ge=1.0, description="max(1, windowed root maximum)")
    window: int = Field(..., ge=1)
    fit_estimate: Optional[float] = Field(
        None,
        description="exp of the k-slope of a log-linear fit with a log k term",
    )

    model_config = ConfigDict(frozen=True)

    @property
    def rate(self) -> float:
        """Fitted growth rate, floored at 1; the root estimate when no fit exists."""
        if self.fit_estimate is None:
            return self.estimate
        return max(1.0, self.fit_estimate)


class TorusSupResult(BaseModel):
    """Grid-and-refine supremum of the spectral radius over the unit torus.

    The value is a lower bound of the true supremum.
    """

    sup_value: float
    argmax_angles: List[float] = Field(..., description="Angles of the incumbent point")
    grid: int = Field(..., ge=8)
    refine_rounds: int = Field(..., ge=0)
    points_probed: int = Field(0, ge=0)
    lower_bound: bool = True

    model_config = ConfigDict(frozen=True)

    @property
    def argmax(self) -> List[complex]:
        """Incumbent point as unit-modulus complex numbers."""
        return [cmath.exp(1j * angle) for angle in self.argmax_angles]


class CoefficientBoundResult(BaseModel):
    """Outcome of the coefficient-versus-supremum bound check."""

    lhs: int = Field(..., description="Sum of absolute coefficients")
    rhs: float = Field(..., description="(M+1)^v * grid sup * 1.02")
    holds: bool
    degree_span: int
    var_count: int

    model_config = ConfigDict(frozen=True)


class TraceSandwichResult(BaseModel):
    """Two-sided estimate sup|tr A^k| <= ||tr A^k|| <= (k*span+1)^v sup|tr A^k|."""

    k: int
    lower: float
    norm: int
    upper: float
    holds: bool

    model_config = ConfigDict(frozen=True)


class TracePowerGrowth(BaseModel):
    """Exact trace-power sequences of a Laurent matrix with growth estimates."""

    norm_of_trace_seq: List[int]
    trace_of_norm_seq: List[int]
    total_norm_seq: List[int]
    norm_of_trace_growth: GrowthEstimate
    trace_of_norm_growth: GrowthEstimate
    total_norm_growth: GrowthEstimate

    model_config = ConfigDict(frozen=True)


class Zeta1Row(BaseModel):
    """Trace data of the group-ring matrix of beta^k."""

    k: int = Field(..., ge=1)
    trace_of_norms: int = Field(..., ge=0)
    norm_of_collected_trace: int = Field(..., ge=0)
    support_size: int = Field(0, ge=0, description="Distinct group elements in the collected trace")

    model_config = ConfigDict(frozen=True)


class Zeta1Summary(BaseModel):
    """Growth summary of the group-ring trace sequence."""

    k_values: List[int]
    trace_of_norms: List[int]
    norm_of_collected_trace: List[int]
    growth: GrowthEstimate

    model_config = ConfigDict(frozen=True)


class OracleResult(BaseModel):
    """Classification of a 3-braid from its Burau matrix at t = -1."""

    braid_class: BraidClass
    trace: int
    dilatation: Optional[float] = None

    model_config = ConfigDict(frozen=True)

    @field_validator("dilatation")
    @classmethod
    def validate_dilatation(cls, v: Optional[float]) -> Optional[float]:
        """Dilatations are strictly greater than one."""
        if v is not None and v <= 1.0:
            raise ValueError("dilatation must be > 1")
        return v


class AnalyzeOptions(BaseModel):
    """Options of the bound pipeline."""

    grid: int = Field(default_factory=lambda: settings.TORUS_GRID, ge=8)
    refine: int = Field(default_factory=lambda: settings.TORUS_REFINE, ge=0)
    kmax: int = Field(default_factory=lambda: settings.KMAX, ge=3)
    with_zeta1: bool = False
    with_lkb: bool = False
    timings: bool = False

    model_config = ConfigDict(frozen=True)


class BoundReport(BaseModel):
    """Per-braid dilatation bounds.

    Bounds are lower bounds: burau_bound <= lambda and lkb_sup <= lambda^2.
    """

    braid: str
    n: int = Field(..., ge=2)
    burau_bound: Optional[float] = Field(None, ge=1.0 - 1e-9)
    burau_argmax_t: Optional[complex] = None
    burau_at_minus1: Optional[float] = None
    lkb_sup: Optional[float] = None
    lkb_bound: Optional[float] = Field(None, ge=1.0 - 1e-9)
    lkb_argmax: Optional[List[complex]] = None
    sharp_at_minus1: Optional[bool] = None
    sharpness_gap: Optional[float] = None
    oracle: Optional[OracleResult] = None
    zeta1_growth: Optional[Zeta1Summary] = None
    errors: Dict[str, str] = Field(default_factory=dict)
    timings_ms: Optional[Dict[str, float]] = None

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class CheckResult(BaseModel):
    """One check inside an invariant suite."""

    name: str
    passed: bool
    detail: str = ""

    model_config = ConfigDict(frozen=True)


class SuiteSummary(BaseModel):
    """Pass/fail summary of a named suite."""

    suite: CheckSuiteName
    passed: bool
    checks: List[CheckResult] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    @property
    def failed(self) -> List[CheckResult]:
        """Checks that did not pass."""
        return [check for check in self.checks if not check.passed]
