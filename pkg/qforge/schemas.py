import json
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from qforge.services.fitting import CorrectionFit
from qforge.services.identities import IdentitySpec
from qforge.services.verifier import IdentityReport, Mismatch, summarize


class MismatchOut(BaseModel):
    monomial: str
    lhs: str
    rhs: str

    @classmethod
    def from_mismatch(cls, mismatch: Mismatch) -> "MismatchOut":
        return cls(monomial=mismatch.monomial, lhs=mismatch.lhs.render(), rhs=mismatch.rhs.render())


class ReportOut(BaseModel):
    id: str
    params: dict[str, int]
    status: Literal["pass", "fail", "error"]
    mismatch: MismatchOut | None
    error: str | None = None
    elapsed: float | None = None

    @classmethod
    def from_report(cls, report: IdentityReport, timing: bool = False) -> "ReportOut":
        return cls(
            id=report.id,
            params=report.params,
            status=report.status.value,
            mismatch=MismatchOut.from_mismatch(report.evidence) if report.evidence else None,
            error=report.error,
            elapsed=round(report.elapsed, 6) if timing else None,
        )


class SummaryOut(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    passed: int = Field(alias="pass")
    failed: int = Field(alias="fail")
    errors: int = Field(alias="error")


class SuiteOut(BaseModel):
    suite: str
    results: list[ReportOut]
    summary: SummaryOut

    @classmethod
    def from_reports(cls, suite: str, reports: list[IdentityReport], timing: bool = False) -> "SuiteOut":
        counts = summarize(reports)
        return cls(
            suite=suite,
            results=[ReportOut.from_report(r, timing) for r in reports],
            summary=SummaryOut(passed=counts["pass"], failed=counts["fail"], errors=counts["error"]),
        )

    def to_json(self) -> str:
        payload = self.model_dump(mode="json", by_alias=True)
        for item in payload["results"]:
            if item["error"] is None:
                del item["error"]
            if item["elapsed"] is None:
                del item["elapsed"]
        return dump_json(payload)


class ExpansionOut(BaseModel):
    expression: str
    polynomial: str


class FitOut(BaseModel):
    id: str
    basis: list[str]
    range: list[int]
    cells: int
    coefficients: dict[str, int] | None

    @classmethod
    def from_fit(cls, identity_id: str, basis: list[str], lo: int, hi: int, fit: CorrectionFit | None, cells: int) -> "FitOut":
        return cls(
            id=identity_id,
            basis=basis,
            range=[lo, hi],
            cells=fit.cells if fit else cells,
            coefficients=fit.as_dict() if fit else None,
        )


class IdentityOut(BaseModel):
    id: str
    params: dict[str, list[int]]
    description: str

    @classmethod
    def from_spec(cls, spec: IdentitySpec) -> "IdentityOut":
        return cls(id=spec.id, params={p.name: [p.lo, p.hi] for p in spec.params}, description=spec.description)


def dump_json(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
