"""Verification reports: per-check records, deterministic JSON, text tables."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .rings import BiDegree


@dataclass
class CheckRecord:
    check_id: str
    bidegree: Optional[Tuple[int, int]]
    lhs: Any
    rhs: Any
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "check_id": self.check_id,
            "bidegree": list(self.bidegree) if self.bidegree is not None else None,
            "lhs_dims": self.lhs,
            "rhs_dims": self.rhs,
            "pass": bool(self.passed),
        }
        if self.note:
            out["note"] = self.note
        return out

    def sort_key(self) -> tuple:
        b = self.bidegree if self.bidegree is not None else (-(10 ** 9), -(10 ** 9))
        return (self.check_id, b[1], b[0])


@dataclass
class VerificationReport:
    command: str
    records: List[CheckRecord] = field(default_factory=list)
    digest: str = ""
    window: Optional[dict] = None
    cap: Optional[int] = None
    tables: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    wall_time: Optional[float] = None

    def add(self, check_id: str, bidegree, lhs, rhs, passed: bool | None = None, note: str = "") -> CheckRecord:
        if isinstance(bidegree, BiDegree):
            bidegree = (bidegree.x, bidegree.t)
        rec = CheckRecord(check_id, bidegree, lhs, rhs, lhs == rhs if passed is None else passed, note)
        self.records.append(rec)
        return rec

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for r in other.records:
            self.records.append(CheckRecord(prefix + r.check_id, r.bidegree, r.lhs, r.rhs, r.passed, r.note))
        for k, v in other.tables.items():
            self.tables[prefix + k] = v
        self.notes.extend(other.notes)
        if other.cap is not None:
            self.cap = max(self.cap or 0, other.cap)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> List[CheckRecord]:
        return [r for r in sorted(self.records, key=CheckRecord.sort_key) if not r.passed]

    def first_failure(self) -> Optional[CheckRecord]:
        fails = self.failures()
        return fails[0] if fails else None

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "input_digest": self.digest,
            "window": self.window,
            "cap": self.cap,
            "records": [r.to_dict() for r in sorted(self.records, key=CheckRecord.sort_key)],
            "tables": self.tables,
            "notes": sorted(set(self.notes)),
            "verdict": "pass" if self.passed else "fail",
        }
        if self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    def summary(self) -> str:
        n = len(self.records)
        bad = len(self.failures())
        verdict = "PASS" if self.passed else "FAIL"
        lines = [f"{self.command}: {verdict} ({n - bad}/{n} checks)"]
        for r in self.failures()[:10]:
            lines.append(f"  failed {r.check_id} at {r.bidegree}: {r.lhs} vs {r.rhs} {r.note}".rstrip())
        lines.extend(f"  note: {n}" for n in sorted(set(self.notes)))
        for name, rows in self.tables.items():
            if "[x,t,dim" in name and rows:
                grid = {(r[0], r[1]): r[2] for r in rows}
                xs = sorted({a for a, _ in grid})
                ts = sorted({b for _, b in grid})
                lines.append(render_table(grid, xs, ts, title=name.split("[")[0]))
        return "\n".join(lines)


def render_table(table: Dict[Tuple[int, int], int], xs: Sequence[int], ts: Sequence[int],
                 title: str = "") -> str:
    """Rows are t-degrees (descending), columns x-degrees."""
    width = max([3] + [len(str(v)) + 1 for v in table.values()] + [len(str(a)) + 1 for a in xs])
    lines = [title] if title else []
    lines.append("t\\x".rjust(5) + "".join(str(a).rjust(width) for a in xs))
    for b in sorted(ts, reverse=True):
        lines.append(str(b).rjust(5) + "".join(str(table.get((a, b), 0)).rjust(width) for a in xs))
    return "\n".join(lines)


def table_records(table: Dict[Tuple[int, int], int]) -> List[list]:
    """A JSON-friendly, sorted form of a bidegree table: ``[[x, t, dim], ...]``."""
    return [[a, b, v] for (a, b), v in sorted(table.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
