"""Reports and their JSON, CSV and plain-table renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .serialize import to_jsonable


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None


@dataclass
class Report:
    command: list
    payload: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    columns: tuple | None = None      # set for tabular payloads
    rows: list | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, witness=None) -> bool:
        self.checks.append(Check(name, bool(passed), witness))
        return bool(passed)

    def as_dict(self) -> dict:
        out = {"command": list(self.command)}
        if self.payload:
            out["result"] = to_jsonable(self.payload)
        if self.rows is not None:
            out["columns"] = list(self.columns)
            out["rows"] = to_jsonable(self.rows)
        out["checks"] = [{"name": c.name, "passed": c.passed, **({"witness": to_jsonable(c.witness)}
                                                                  if c.witness is not None else {})}
                         for c in self.checks]
        out["summary"] = {"checks": len(self.checks), "failed": sum(not c.passed for c in self.checks),
                          "status": "pass" if self.ok else "fail"}
        return out


def _cell(v) -> str:
    v = to_jsonable(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _table_rows(report: Report) -> tuple[list, list]:
    if report.rows is not None:
        return list(report.columns), [[_cell(v) for v in r] for r in report.rows]
    flat = [[k, _cell(v)] for k, v in to_jsonable(report.payload).items()]
    flat += [[f"check:{c.name}", "pass" if c.passed else "fail"] for c in report.checks]
    return ["key", "value"], flat


def render(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.as_dict(), indent=2, ensure_ascii=False) + "\n"
    header, rows = _table_rows(report)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(rows)
        if report.rows is not None and report.checks:
            writer.writerow([])
            writer.writerow(["check", "status"])
            writer.writerows([[c.name, "pass" if c.passed else "fail"] for c in report.checks])
        return buf.getvalue()
    if fmt == "table":
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
        lines = ["  ".join(str(h).ljust(w) for h, w in zip(header, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(str(x).ljust(w) for x, w in zip(r, widths)) for r in rows]
        if report.rows is not None:
            lines += [""] + [f"{c.name}: {'pass' if c.passed else 'fail'}" for c in report.checks]
        lines.append(f"status: {'pass' if report.ok else 'fail'}")
        return "\n".join(line.rstrip() for line in lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
