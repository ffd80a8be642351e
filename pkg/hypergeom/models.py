"""
Pydantic Models for Run Configuration and Reports

Every check produces a report model; the CLI serializes it to JSON (the
stable contract) or to a short text summary. Check failures live in the
report, never in exceptions.
"""

from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from hypergeom import config

Command = Literal[
    "verify-euler-data",
    "check-link",
    "degree-audit",
    "assemble-series",
    "euler-series-check",
    "mirror-transform",
    "selftest",
]


class CheckStatus(str, Enum):
    """Outcome of a single case."""
    PASS = "pass"
    FAIL = "fail"
    POLE = "pole"
    ZERO = "zero"


class RunConfig(BaseModel):
    """
    Validated configuration of one CLI run.

    Attributes:
        command: Subcommand to execute
        n: Size of the flag manifold Fl(n)
        max_degree: Scalar bound (every d_i <= bound) or an explicit multidegree
        delta_max: Largest balloon multiplicity for linking checks
        zeta_order: Highest total zeta-order in Euler-series checks
        jobs: Worker processes (1 runs inline)
        idata_path: I-data JSON file
        report_path: Where to write the report (stdout when omitted)
        format: json or text
        source: idata (fixture I-data) or synthetic (round trip) for mirror-transform
        seed: Seed of the synthetic mirror-transform round trip
    """
    command: Command
    n: int = Field(..., ge=config.MIN_N, le=config.MAX_N, description="Fl(n) with 2 <= n <= MAX_N")
    max_degree: Union[int, List[int]] = Field(config.DEFAULT_MAX_DEGREE, description="Degree bound")
    delta_max: int = Field(config.DEFAULT_DELTA_MAX, ge=1, description="Largest balloon multiplicity")
    zeta_order: int = Field(config.DEFAULT_ZETA_ORDER, ge=0, description="Highest zeta order")
    jobs: int = Field(config.DEFAULT_JOBS, ge=1, description="Worker processes")
    idata_path: Optional[Path] = Field(None, description="I-data JSON file")
    report_path: Optional[Path] = Field(None, description="Report destination")
    format: Literal["json", "text"] = "json"
    source: Literal["idata", "synthetic"] = Field("idata", description="Input of mirror-transform")
    seed: int = Field(0, description="Seed for synthetic data")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"command": "verify-euler-data", "n": 3, "max_degree": [2, 2], "jobs": 4}
        }
    )

    @field_validator("max_degree")
    @classmethod
    def _non_negative(cls, value):
        entries = value if isinstance(value, list) else [value]
        if any(entry < 0 for entry in entries):
            raise ValueError("degree bounds must be >= 0")
        return value

    def degree_bound(self) -> List[int]:
        """max_degree as an explicit list of n-1 entries."""
        if isinstance(self.max_degree, int):
            return [self.max_degree] * (self.n - 1)
        if len(self.max_degree) != self.n - 1:
            raise ValueError(f"max_degree needs {self.n - 1} entries, got {len(self.max_degree)}")
        return list(self.max_degree)


class Report(BaseModel):
    """Common report envelope."""
    schema_version: int = config.REPORT_SCHEMA_VERSION
    check: str
    n: int
    elapsed_ms: float = Field(0.0, description="Wall time; excluded from determinism")

    def statuses(self) -> List[CheckStatus]:
        return [case.status for case in getattr(self, "cases", [])]

    @property
    def passed(self) -> bool:
        return all(status == CheckStatus.PASS for status in self.statuses())

    def summary(self) -> str:
        statuses = self.statuses()
        failed = sum(1 for status in statuses if status != CheckStatus.PASS)
        verdict = "PASS" if self.passed else "FAIL"
        return f"{self.check} n={self.n}: {len(statuses)} cases, {failed} failed -> {verdict}"


class ErrorReport(Report):
    """
    Written when a run stops on a configuration or input error.

    Attributes:
        check: The subcommand that was requested
        error: What was wrong with the configuration or input
    """
    error: str

    def statuses(self) -> List[CheckStatus]:
        return [CheckStatus.FAIL]

    def summary(self) -> str:
        return f"{self.check} n={self.n}: input error -> FAIL"


class EulerCase(BaseModel):
    """
    One r of the Euler-data identity.

    Attributes:
        r: The splitting degree r <= d
        part: Which part was checked ("q" for the full product)
        status: pass or fail
        difference: Rendering of L / R on failure
    """
    d: List[int]
    r: List[int]
    part: str = "q"
    status: CheckStatus
    difference: Optional[str] = None


class EulerDataReport(Report):
    check: str = "euler-data"
    d: Optional[List[int]] = None
    cases: List[EulerCase] = Field(default_factory=list)


class DegreeAuditEntry(BaseModel):
    """
    Exact alpha-degree bookkeeping for tau* j_0* Q_d.

    Attributes:
        alpha_degree: deg_alpha after factored cancellation
        part_degrees: deg_alpha of q1, q2, q3 (they sum to alpha_degree)
        displayed_bound: n*d_{n-1} - sum_i sum_{a<=i} (d_ia + 1)
        bound_holds: alpha_degree <= displayed_bound
        c1: <c_1(X), d>
        slack: c1 - alpha_degree
        stronger_claim_holds: slack >= n(n-1)/2
        status: pass iff slack >= 0
    """
    d: List[int]
    alpha_degree: int
    part_degrees: List[int]
    displayed_bound: int
    bound_holds: bool
    c1: int
    slack: int
    stronger_claim_holds: bool
    status: CheckStatus
    notes: List[str] = Field(default_factory=list)


class DegreeAuditReport(Report):
    check: str = "degree-audit"
    cases: List[DegreeAuditEntry] = Field(default_factory=list)


class LinkCase(BaseModel):
    """
    Linking check for one directed balloon and multiplicity.

    Attributes:
        balloon: Serialized balloon, e.g. "213x(1,2)"
        delta: Multiplicity
        d: Multidegree delta * [pq]
        status: pass, fail, pole when alpha = lambda/delta kills a denominator
            factor, zero when it kills a numerator factor
        lhs: Restricted Euler data on failure
        rhs: Balloon product on failure
        detail: The vanishing factor for pole and zero cases
        assumptions: Conventions the check relies on
    """
    check: str = "link"
    n: int
    balloon: str
    delta: int
    d: List[int]
    status: CheckStatus
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    detail: Optional[str] = None
    assumptions: List[str] = Field(default_factory=list)


class PairingConflict(BaseModel):
    """A balloon where the case-list form of <y_a,[pq]> disagrees with the formula."""
    a: int
    transposition: List[int]
    displayed: int
    formula: int


class LinkReport(Report):
    """
    Attributes:
        pairing_convention: Which form of <y_a,[pq]> the check uses
        pairing_conflicts: Where the case-list form would give another value
    """
    check: str = "link"
    delta_max: int = 1
    pairing_convention: str = ""
    pairing_conflicts: List[PairingConflict] = Field(default_factory=list)
    cases: List[LinkCase] = Field(default_factory=list)


class EulerSeriesCase(BaseModel):
    """
    One zeta-monomial of the Euler-series condition at degree d.

    Attributes:
        monomial: Exponents of zeta_1..zeta_{n-1}
        status: pass when the localization sum lies in Q(x)[u][alpha]
        denominator: Offending denominator on failure
    """
    d: List[int]
    monomial: List[int]
    status: CheckStatus
    denominator: Optional[str] = None


class EulerSeriesReport(Report):
    check: str = "euler-series"
    zeta_order: int = 0
    cases: List[EulerSeriesCase] = Field(default_factory=list)


class SeriesCoefficientModel(BaseModel):
    """Serialized series coefficient: one expression per fixed point."""
    d: List[int]
    restrictions: Dict[str, str]
    alpha_degree: int


class AssembleReport(Report):
    check: str = "assemble-series"
    cutoff: List[int]
    coefficients: List[SeriesCoefficientModel] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return True


class MirrorCase(BaseModel):
    """
    Mirror-transform data at one degree.

    Attributes:
        d: Degree
        f0: alpha^1 part of f_d (cancels the alpha^0 excess)
        f1: alpha^0 part of f_d (cancels the scalar alpha^-1 excess)
        g: g_d components (cancel the linear alpha^-1 excess)
        a_top: Highest alpha power present in A_d after the transform
        status: pass iff deg_alpha A_d <= -2 at every fixed point
    """
    d: List[int]
    f0: str
    f1: str
    g: List[str]
    a_top: Optional[int]
    status: CheckStatus


class MirrorReport(Report):
    check: str = "mirror-transform"
    cutoff: List[int]
    source: str = "idata"
    recovered: Optional[bool] = None
    idempotent: Optional[bool] = None
    error: Optional[str] = Field(None, description="NonNormalizable residual, if any")
    assumptions: List[str] = Field(default_factory=list)
    cases: List[MirrorCase] = Field(default_factory=list)

    def statuses(self) -> List[CheckStatus]:
        statuses = super().statuses()
        if self.error is not None:
            statuses.append(CheckStatus.FAIL)
        for flag in (self.recovered, self.idempotent):
            if flag is not None:
                statuses.append(CheckStatus.PASS if flag else CheckStatus.FAIL)
        return statuses


class SelftestCase(BaseModel):
    name: str
    status: CheckStatus
    detail: Optional[str] = None


class SelftestReport(Report):
    check: str = "selftest"
    cases: List[SelftestCase] = Field(default_factory=list)


# I-data input format

class IDataEntryModel(BaseModel):
    """
    One degree of I-data.

    Attributes:
        d: Effective multidegree
        restrictions: One expression per fixed point, keyed by one-line notation
        provenance: Where the entry comes from (mandatory)
        polynomial: Whether the GKM edge condition must hold
    """
    d: List[int]
    restrictions: Dict[str, str]
    provenance: str = Field(..., min_length=1)
    polynomial: bool = False


class IDataFileModel(BaseModel):
    n: int = Field(..., ge=config.MIN_N, le=config.MAX_N)
    entries: List[IDataEntryModel]
