"""Report serialization: JSON, TSV and plain text."""

from __future__ import annotations

import csv
import io
import json

from .pipeline import Report

FORMATS = ("json", "tsv", "text")
TSV_FIELDS = (
    "option", "message", "pattern", "evidence_kind", "evidence_score",
    "evidence_witness", "evidence_file", "evidence_line", "file", "line",
)  # fmt: skip


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"


def to_tsv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(TSV_FIELDS)
    for f in report.findings:
        d = f.to_dict()
        ev = d["evidence"]
        writer.writerow(
            [d["option"], d["message"], d["pattern"], ev["kind"], ev["score"],
             ev["witness"], ev["file"], ev["line"], d["file"], d["line"]]
        )  # fmt: skip
    return buf.getvalue()


def to_text(report: Report) -> str:
    lines = []
    for f in report.findings:
        ev = f.evidence
        lines.append(f"{f.location.file}:{f.location.line}: [{f.option}] pattern {f.pattern_id}: {f.message}")
        lines.append(f"    via {ev.kind.value} ({ev.score:.3f}) {ev.witness} at {ev.location.file}:{ev.location.line}")
    stats = report.stats
    lines.append(
        f"{stats['findings']} finding(s) in {stats['corpus'].get('files', 0)} file(s), "
        f"{stats['corpus'].get('unparseable', 0)} unparseable"
    )
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "tsv":
        return to_tsv(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
