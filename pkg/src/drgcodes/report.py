"""Compare computed verdicts with the tabulated ones and render the comparison."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from . import catalog
from .catalog import CatalogEntry
from .decide import REASON_RULES, Verdict, decide


@dataclass
class ReportRow:
    entry: CatalogEntry
    computed: Verdict

    @property
    def match(self) -> bool:
        return self.computed.status == self.entry.expected_verdict

    @property
    def reason_match(self) -> bool:
        return self.computed.fired(REASON_RULES.get(self.entry.expected_reason, set()))

    @property
    def display_status(self) -> str:
        v = self.computed
        if v.provenance == "published":
            return f"{v.status} (published result, not independently verified)"
        return v.status

    def to_dict(self) -> dict:
        e, v = self.entry, self.computed
        return {
            "table": e.table, "name": e.name, "array": str(e.array), "n": e.n, "d": e.d, "g": e.g,
            "expected": e.expected_verdict, "computed": v.status, "provenance": v.provenance,
            "rule": v.rule, "published_reason": e.expected_reason, "match": self.match,
            "reason_match": self.reason_match,
            "witness": list(v.witness) if v.witness is not None else None,
            "nodes": v.nodes,
        }


def evaluate(entry: CatalogEntry, *, budget: int | None = None, full: bool = False) -> ReportRow:
    graph = None
    if entry.has_builder and (full or not entry.desk_infeasible):
        graph = catalog.build(entry.name)
    return ReportRow(entry, decide(entry, graph, budget=budget, full=full))


def build_report(entries, *, budget: int | None = None, full: bool = False) -> list[ReportRow]:
    return [evaluate(e, budget=budget, full=full) for e in entries]


COLUMNS = ["table", "name", "array", "n", "d", "g", "expected", "computed", "rule",
           "published_reason", "match", "reason_match", "witness"]


def to_markdown(rows: list[ReportRow]) -> str:
    head = ["name", "array", "n", "d", "g", "expected", "computed", "rule", "reason", "match"]
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for r in rows:
        e, v = r.entry, r.computed
        lines.append("| " + " | ".join([
            e.name, str(e.array), str(e.n), str(e.d), str(e.g), e.expected_verdict,
            r.display_status, v.rule or "", e.expected_reason,
            ("ok" if r.match else "MISMATCH") + (
                "" if r.reason_match else " (published)" if v.provenance == "published" else " (other reason)"),
        ]) + " |")
    return "\n".join(lines) + "\n"


def to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        d = r.to_dict()
        d["witness"] = " ".join(map(str, d["witness"])) if d["witness"] else ""
        w.writerow(d)
    return buf.getvalue()


def to_json(rows: list[ReportRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2)


FORMATS = {"md": to_markdown, "csv": to_csv, "json": to_json}
