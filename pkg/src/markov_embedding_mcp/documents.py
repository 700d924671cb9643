"""JSON documents exchanged by the CLI and the MCP tools."""

import math
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .classifier import CaseTag, NecessaryReport
from .embedder import EmbeddingResult, GeneratorCandidate
from .inhom import ConstantSegment, GReport, SampledSegment, Schedule
from .linalg import Mat, Tolerances, as_mat

Rows = list[list[float]]


def _rows(M: Mat) -> Rows:
    return [[float(v) for v in row] for row in np.asarray(M, dtype=float)]


class ToleranceOverrides(BaseModel):
    """Partial tolerance policy. Unset fields keep the caller's defaults."""

    model_config = ConfigDict(extra="forbid")

    spec_cluster: float | None = Field(default=None, gt=0)
    nonneg: float | None = Field(default=None, gt=0)
    rowsum: float | None = Field(default=None, gt=0)
    residual: float | None = Field(default=None, gt=0)
    rank: float | None = Field(default=None, gt=0)

    def apply(self, base: Tolerances) -> Tolerances:
        return base.model_copy(update=self.model_dump(exclude_none=True))


class MatrixDocument(BaseModel):
    """A square matrix of dimension 2..4."""

    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=2, le=4, description="Matrix dimension")
    rows: Rows = Field(description="Row-major entries")
    label: str | None = Field(default=None, description="Free-form label echoed in outputs")
    tolerances: ToleranceOverrides | None = Field(
        default=None, description="Per-document tolerance overrides"
    )

    @model_validator(mode="after")
    def _square(self) -> "MatrixDocument":
        if len(self.rows) != self.dim or any(len(r) != self.dim for r in self.rows):
            raise ValueError(f"rows must form a {self.dim}x{self.dim} matrix")
        if not all(math.isfinite(v) for r in self.rows for v in r):
            raise ValueError("rows must be finite")
        return self

    @classmethod
    def from_mat(cls, M: Mat, label: str | None = None) -> "MatrixDocument":
        M = np.asarray(M, dtype=float)
        return cls(dim=M.shape[0], rows=_rows(M), label=label)

    def to_mat(self) -> Mat:
        return as_mat(self.rows)

    def effective_tolerances(self, base: Tolerances) -> Tolerances:
        return self.tolerances.apply(base) if self.tolerances else base


class ComplexValue(BaseModel):
    re: float
    im: float = 0.0

    @classmethod
    def of(cls, z: complex) -> "ComplexValue":
        z = complex(z)
        return cls(re=z.real, im=z.imag)


class CaseDocument(BaseModel):
    dim: int
    min_poly_degree: int
    pattern: str
    eigen_data: dict[str, ComplexValue] = Field(default_factory=dict)

    @classmethod
    def from_case(cls, case: CaseTag) -> "CaseDocument":
        return cls(
            dim=case.dim,
            min_poly_degree=case.min_poly_degree,
            pattern=case.pattern.value,
            eigen_data={k: ComplexValue.of(v) for k, v in case.eigen_data.items()},
        )


class GeneratorDocument(BaseModel):
    branch: int
    construction: str
    residual: float = Field(description="||exp(Q) - M|| relative to scale(M)")
    matrix: Rows

    @classmethod
    def from_candidate(cls, g: GeneratorCandidate) -> "GeneratorDocument":
        return cls(
            branch=g.branch,
            construction=g.construction.value,
            residual=g.residual,
            matrix=_rows(g.matrix),
        )


class VerdictDocument(BaseModel):
    """Embedding verdict. ``verdict`` is absent for classification-only output."""

    input: MatrixDocument
    case_tag: CaseDocument | None = None
    necessary: dict[str, bool] | None = None
    verdict: Literal["Embeddable", "NotEmbeddable", "Undecided"] | None = None
    reason: str | None = None
    generators: list[GeneratorDocument] = Field(default_factory=list)
    uniqueness: str | None = None
    model: dict[str, float | str] | None = Field(
        default=None, description="Model class and parameters for model commands"
    )
    elapsed_ms: float | None = Field(
        default=None, description="Wall time, only when timing was requested"
    )

    @classmethod
    def from_result(
        cls,
        source: MatrixDocument,
        result: EmbeddingResult,
        *,
        model: dict[str, float | str] | None = None,
        elapsed_ms: float | None = None,
    ) -> "VerdictDocument":
        return cls(
            input=source,
            case_tag=CaseDocument.from_case(result.case) if result.case else None,
            verdict=result.verdict.value,
            reason=result.reason.value if result.reason else None,
            generators=[GeneratorDocument.from_candidate(g) for g in result.generators],
            uniqueness=result.uniqueness.value,
            model=model,
            elapsed_ms=elapsed_ms,
        )

    @classmethod
    def from_case(
        cls, source: MatrixDocument, case: CaseTag | None, report: NecessaryReport
    ) -> "VerdictDocument":
        return cls(
            input=source,
            case_tag=CaseDocument.from_case(case) if case else None,
            necessary={
                "diag_positive": report.diag_positive,
                "det_positive": report.det_positive,
                "unit_circle_ok": report.unit_circle_ok,
                "culver_ok": report.culver_ok,
                "transitivity_ok": report.transitivity_ok,
            },
        )


class GReportDocument(BaseModel):
    input: MatrixDocument
    necessary_ok: bool
    verdict: Literal["GEmbeddable", "NotGEmbeddable", "Undecided"]
    route: str
    det: float
    b_quantity: float | None = None
    factor_bound: int | None = None
    det_factor_bound: int | None = None

    @classmethod
    def from_report(cls, source: MatrixDocument, report: GReport) -> "GReportDocument":
        return cls(
            input=source,
            necessary_ok=report.necessary_ok,
            verdict=report.verdict.value,
            route=report.route.value,
            det=report.det,
            b_quantity=report.b_quantity,
            factor_bound=report.factor_bound,
            det_factor_bound=report.det_factor_bound,
        )


class ConstantSegmentDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    Q: Rows
    duration: float = Field(gt=0)


class SampledSegmentDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    samples: list[Rows] = Field(min_length=3)
    step: float = Field(gt=0)


SegmentDocument = Annotated[
    ConstantSegmentDocument | SampledSegmentDocument, Field(union_mode="left_to_right")
]


class ScheduleDocument(BaseModel):
    """Segments of a time-inhomogeneous generator family, in order."""

    segments: list[SegmentDocument] = Field(min_length=1)

    def to_schedule(self, tol: Tolerances | None = None) -> Schedule:
        segments = []
        for seg in self.segments:
            if isinstance(seg, ConstantSegmentDocument):
                segments.append(ConstantSegment(as_mat(seg.Q), seg.duration))
            else:
                segments.append(
                    SampledSegment(tuple(as_mat(s) for s in seg.samples), seg.step)
                )
        return Schedule(tuple(segments), tol or Tolerances())


class FlowDocument(BaseModel):
    """Transition matrix of a schedule plus its determinant report."""

    result: MatrixDocument
    method: Literal["pbs", "product"]
    t: float
    det: float
    liouville_det: float | None = None
    det_check: bool | None = Field(
        default=None, description="det(result) agrees with exp(integral of trace)"
    )


SCHEMAS: dict[str, type[BaseModel]] = {
    "matrix": MatrixDocument,
    "verdict": VerdictDocument,
    "greport": GReportDocument,
    "schedule": ScheduleDocument,
    "flow": FlowDocument,
}
