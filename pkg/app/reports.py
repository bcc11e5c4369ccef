import io
import json
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel, Field


class SpecSummary(BaseModel):
    p: int
    m: int
    k: int
    q: int
    d1: int
    d2: int
    e: int


class WeightEntry(BaseModel):
    w: int
    freq: str = Field(..., description="Frequency as a decimal string (arbitrary precision)")


class ValueEntry(BaseModel):
    s: int
    freq: str


class RankEntry(BaseModel):
    rank: int
    freq: str


class HistogramEntry(BaseModel):
    count: int = Field(..., description="Solutions per bucket")
    multiplicity: str = Field(..., description="Number of buckets with that many solutions")


class WeightDistributionReport(BaseModel):
    spec: SpecSummary
    method: str
    weights: List[WeightEntry]
    seed: Optional[int] = None
    samples: Optional[int] = None


class ValueDistributionReport(BaseModel):
    spec: SpecSummary
    method: str
    values: List[ValueEntry]
    ranks: Optional[List[RankEntry]] = None
    seed: Optional[int] = None
    samples: Optional[int] = None


class CountReport(BaseModel):
    lemma: str
    spec: Optional[SpecSummary] = None
    computed: str
    predicted: str
    match: bool
    hard: bool = Field(True, description="Hard assertions fail the run; soft ones are reported only")
    message: str = ""
    histogram: Optional[List[HistogramEntry]] = None
    predicted_histogram: Optional[List[HistogramEntry]] = None
    details: Dict[str, Any] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    which: str
    passed: bool
    reports: List[CountReport]


class FieldReport(BaseModel):
    p: int
    m: int
    q: int
    modulus: List[int]
    pi: List[int]
    tables: bool


class TableRow(BaseModel):
    label: int
    freq: str


class TablesReport(BaseModel):
    p: int
    m: int
    e: int
    parameters: List[int]
    values: List[TableRow]
    weights: List[TableRow]
    enumerator: str
    moments: Optional[List[str]] = None
    frequency_system: Optional[List[str]] = None


def histogram_entries(histogram: Dict[int, int]) -> List[HistogramEntry]:
    return [HistogramEntry(count=c, multiplicity=str(n)) for c, n in sorted(histogram.items())]


def to_json(report: BaseModel) -> str:
    return report.model_dump_json(indent=2) + "\n"


def to_csv(rows: Sequence[Sequence[Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    pd.DataFrame([list(r) for r in rows], columns=list(columns)).to_csv(buffer, index=False)
    return buffer.getvalue()


def report_to_csv(report: BaseModel) -> str:
    """CSV rendering for the report kinds that have a tabular form."""
    if isinstance(report, WeightDistributionReport):
        return to_csv([(e.w, e.freq) for e in report.weights], ["weight", "frequency"])
    if isinstance(report, ValueDistributionReport):
        return to_csv([(e.s, e.freq) for e in report.values], ["s", "frequency"])
    if isinstance(report, VerificationReport):
        rows = [(r.lemma, r.computed, r.predicted, r.match) for r in report.reports]
        return to_csv(rows, ["lemma", "computed", "predicted", "match"])
    if isinstance(report, TablesReport):
        return to_csv([(r.label, r.freq) for r in report.weights], ["weight", "frequency"])
    # Field summaries have no table; fall back to a one-row dump
    flat = json.loads(report.model_dump_json())
    return to_csv([[json.dumps(v) if isinstance(v, list) else v for v in flat.values()]], list(flat))
