"""Verification reports and their JSON / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..bang import BangProfile
from .suites import CheckRecord, digest

VERDICTS = ("pass", "fail", "inconclusive")
CSV_FIELDS = ("suite", "check_id", "inputs_digest", "residual", "verdict")


class ReportError(Exception):
    pass


@dataclass
class VerificationReport:
    records: list[CheckRecord]
    seed: int
    version: str
    config_digest: str
    variant: str = "standard"
    timing: bool = False
    schema_version: int = 1
    extra_env: dict = field(default_factory=dict)

    def __post_init__(self):
        self.records = sorted(self.records, key=lambda r: (r.suite, r.check_id))

    @property
    def summary(self) -> dict:
        counts = {v: 0 for v in VERDICTS}
        for r in self.records:
            counts[r.verdict] += 1
        return counts

    @property
    def failed(self) -> bool:
        return self.summary["fail"] > 0

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "environment": {"seed": self.seed, "version": self.version, "variant": self.variant, **self.extra_env},
            "config_digest": self.config_digest,
            "summary": self.summary,
            "records": [r.to_dict(self.timing) for r in self.records],
        }


def report_json(report: VerificationReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def report_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    fields = CSV_FIELDS + (("wall_time",) if report.timing else ())
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in report.records:
        row = r.to_dict(report.timing)
        row["residual"] = "" if row["residual"] is None else (
            repr(row["residual"]) if isinstance(row["residual"], float) else row["residual"]
        )
        w.writerow(row)
    return buf.getvalue()


def _write(text: str, path) -> None:
    if path is None:
        print(text, end="")
        return
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise ReportError(f"cannot write report to {path}: {exc.strerror}") from None


def emit_report(report, fmt: str = "json", path=None) -> None:
    """Write a VerificationReport (json or csv) or a BangProfile (csv).

    ``path`` None writes to stdout.
    """
    if isinstance(report, BangProfile):
        if fmt != "csv":
            raise ReportError("profiles are exported as csv only")
        _write(report.csv_text(), path)
        return
    if fmt == "json":
        _write(report_json(report), path)
    elif fmt == "csv":
        _write(report_csv(report), path)
    else:
        raise ReportError(f"unknown report format {fmt!r}")


def config_digest(raw: dict) -> str:
    return digest(raw)
