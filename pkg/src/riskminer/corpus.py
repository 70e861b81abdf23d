"""Documents, corpora and financial indicator records, plus their file formats.

A corpus file is line-delimited: either JSON lines with keys ``id``, ``text``
and optionally ``label``, ``company``, ``date``, or a CSV with those columns
in its header.  Financial records come from a CSV with the exact header
``FINANCIAL_COLUMNS``.
"""

import csv
import datetime as dt
import enum
import io
import json
from collections import Counter
from dataclasses import dataclass, field

from .errors import (
    DuplicateId,
    EmptyText,
    MalformedRecord,
    NonPositiveAsset,
    UnknownReportType,
)

CORPUS_FIELDS = ("id", "text", "label", "company", "date")
FINANCIAL_COLUMNS = (
    "company", "report_type", "report_date", "total_assets", "net_profit",
    "liquidity_ratio", "debt_ratio", "risk_assessment",
)


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: str | None = None
    company: str | None = None
    date: dt.date | None = None

    def as_record(self):
        return {
            "id": self.id,
            "text": self.text,
            "label": self.label,
            "company": self.company,
            "date": self.date.isoformat() if self.date else None,
        }


@dataclass(frozen=True)
class Corpus:
    docs: tuple

    def __post_init__(self):
        object.__setattr__(self, "docs", tuple(self.docs))

    def __len__(self):
        return len(self.docs)

    def __iter__(self):
        return iter(self.docs)

    def __getitem__(self, i):
        return self.docs[i]

    @property
    def label_set(self):
        return tuple(sorted({d.label for d in self.docs if d.label is not None}))

    @property
    def ids(self):
        return [d.id for d in self.docs]

    @property
    def labels(self):
        return [d.label for d in self.docs]

    @property
    def texts(self):
        return [d.text for d in self.docs]


def _parse_date(value, line):
    if value is None or value == "":
        return None
    try:
        return dt.date.fromisoformat(value)
    except (TypeError, ValueError):
        raise MalformedRecord(line, f"date {value!r} is not ISO-8601 (YYYY-MM-DD)") from None


def _opt_str(value):
    if value is None:
        return None
    value = str(value)
    return value if value != "" else None


def _make_document(rec, line, seen):
    doc_id = rec.get("id")
    text = rec.get("text")
    if doc_id is None or str(doc_id) == "":
        raise MalformedRecord(line, "missing id")
    doc_id = str(doc_id)
    if text is None:
        raise MalformedRecord(line, "missing text")
    if not isinstance(text, str):
        raise MalformedRecord(line, "text must be a string")
    if doc_id in seen:
        raise DuplicateId(doc_id)
    if not text.strip():
        raise EmptyText(doc_id)
    seen.add(doc_id)
    return Document(
        id=doc_id,
        text=text,
        label=_opt_str(rec.get("label")),
        company=_opt_str(rec.get("company")),
        date=_parse_date(rec.get("date"), line),
    )


def parse_corpus(text, format="jsonl"):
    """Parse corpus file contents already read into memory.

    JSON-lines input may carry ``#`` comment lines (e.g. a provenance header).
    """
    docs, seen = [], set()
    if format == "jsonl":
        # only "\n" ends a record: splitlines() would also break on U+0085 etc.
        # inside JSON strings
        for lineno, raw in enumerate(text.split("\n"), start=1):
            raw = raw.rstrip("\r")
            if not raw.strip() or raw.startswith("#"):
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(lineno, exc.msg) from None
            if not isinstance(rec, dict):
                raise MalformedRecord(lineno, "expected a JSON object")
            docs.append(_make_document(rec, lineno, seen))
    elif format == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or not {"id", "text"} <= set(reader.fieldnames):
            raise MalformedRecord(1, "CSV header must contain id and text")
        for rec in reader:
            lineno = reader.line_num
            if None in rec:
                raise MalformedRecord(lineno, "too many fields")
            docs.append(_make_document(rec, lineno, seen))
    else:
        raise ValueError(f"unknown corpus format {format!r}")
    return Corpus(docs)


def load_corpus(path, format=None):
    """Load a corpus from ``path``; format defaults to the file extension."""
    path = str(path)
    if format is None:
        format = "csv" if path.lower().endswith(".csv") else "jsonl"
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh.read(), format)


def dump_corpus(corpus):
    """Serialize to JSON lines (the inverse of ``parse_corpus(.., "jsonl")``)."""
    lines = []
    for d in corpus:
        rec = {k: v for k, v in d.as_record().items() if v is not None}
        lines.append(json.dumps(rec, ensure_ascii=False, sort_keys=False))
    return "".join(line + "\n" for line in lines)


# --- financial records -----------------------------------------------------

class ReportType(enum.Enum):
    ANNUAL = "Annual"
    QUARTERLY = "Quarterly"
    MARKET_ANALYSIS = "MarketAnalysis"

    @classmethod
    def parse(cls, value):
        key = "".join(str(value).lower().split())
        if key.endswith("report") and key != "report":
            key = key[: -len("report")]
        for member in cls:
            if member.value.lower() == key:
                return member
        raise UnknownReportType(f"unknown report type {value!r}")


@dataclass(frozen=True)
class FinancialRecord:
    company: str
    report_type: ReportType
    report_date: dt.date
    total_assets: float
    net_profit: float
    liquidity_ratio: float
    debt_ratio: float
    risk_assessment: str = ""


def _parse_amount(value, name, line):
    s = str(value).strip()
    parts = s.split()
    if len(parts) == 2 and parts[1].lower() == "billion":
        s = parts[0]
    try:
        return float(s)
    except ValueError:
        raise MalformedRecord(line, f"{name}={value!r} is not a number") from None


def parse_financial_records(text, max_debt_ratio=1.5):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedRecord(1, "empty file") from None
    if tuple(h.strip() for h in header) != FINANCIAL_COLUMNS:
        raise MalformedRecord(1, "header must be " + ",".join(FINANCIAL_COLUMNS))
    records = []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(FINANCIAL_COLUMNS):
            raise MalformedRecord(line, f"expected {len(FINANCIAL_COLUMNS)} fields, got {len(row)}")
        rec = dict(zip(FINANCIAL_COLUMNS, row))
        date = _parse_date(rec["report_date"].strip(), line)
        if date is None:
            raise MalformedRecord(line, "missing report_date")
        total_assets = _parse_amount(rec["total_assets"], "total_assets", line)
        if not total_assets > 0:
            raise NonPositiveAsset(f"line {line}: total_assets must be > 0, got {total_assets}")
        liquidity = _parse_amount(rec["liquidity_ratio"], "liquidity_ratio", line)
        if not liquidity > 0:
            raise MalformedRecord(line, "liquidity_ratio must be > 0")
        debt = _parse_amount(rec["debt_ratio"], "debt_ratio", line)
        if not 0 <= debt <= max_debt_ratio:
            raise MalformedRecord(line, f"debt_ratio must lie in [0, {max_debt_ratio}]")
        records.append(FinancialRecord(
            company=rec["company"].strip(),
            report_type=ReportType.parse(rec["report_type"]),
            report_date=date,
            total_assets=total_assets,
            net_profit=_parse_amount(rec["net_profit"], "net_profit", line),
            liquidity_ratio=liquidity,
            debt_ratio=debt,
            risk_assessment=rec["risk_assessment"],
        ))
    return records


def load_financial_records(path, max_debt_ratio=1.5):
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_financial_records(fh.read(), max_debt_ratio=max_debt_ratio)


def records_to_corpus(records, label_field="company"):
    """Risk-assessment texts as a corpus; ids are ``<company>/<date>``."""
    docs = []
    for r in records:
        docs.append(Document(
            id=f"{r.company}/{r.report_date.isoformat()}",
            text=r.risk_assessment,
            label=getattr(r, label_field) if label_field else None,
            company=r.company,
            date=r.report_date,
        ))
    return Corpus(docs)


# --- validation ------------------------------------------------------------

@dataclass
class ValidationReport:
    n_docs: int
    label_counts: dict
    unlabeled: list = field(default_factory=list)
    empty: list = field(default_factory=list)
    duplicates: list = field(default_factory=list)

    @property
    def n_labels(self):
        return len(self.label_counts)

    @property
    def n_anomalies(self):
        return len(self.unlabeled) + len(self.empty) + len(self.duplicates)

    def format(self):
        lines = [f"documents\t{self.n_docs}", f"labels\t{self.n_labels}",
                 f"anomalies\t{self.n_anomalies}"]
        for label, n in self.label_counts.items():
            lines.append(f"label\t{label}\t{n}")
        for kind, ids in (("unlabeled", self.unlabeled), ("empty", self.empty),
                          ("duplicate", self.duplicates)):
            lines += [f"{kind}\t{i}" for i in ids]
        return "\n".join(lines) + "\n"


def validate_corpus(corpus):
    """Summarize a corpus and list anomalies without touching it.

    Unlabeled documents count as anomalies: every fitting operation that
    needs labels would otherwise silently drop them.
    """
    counts = Counter(d.label for d in corpus if d.label is not None)
    seen, dups = set(), []
    for d in corpus:
        if d.id in seen and d.id not in dups:
            dups.append(d.id)
        seen.add(d.id)
    return ValidationReport(
        n_docs=len(corpus),
        label_counts=dict(sorted(counts.items())),
        unlabeled=[d.id for d in corpus if d.label is None],
        empty=[d.id for d in corpus if not d.text.strip()],
        duplicates=dups,
    )
