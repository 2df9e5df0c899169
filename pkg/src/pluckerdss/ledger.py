"""Append-only record of every field element moved between parties."""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field


@dataclass(frozen=True)
class LedgerRecord:
    kind: str
    elements: int
    metadata: int
    participants: tuple
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "elements": self.elements,
            "metadata": self.metadata,
            "participants": list(self.participants),
            "detail": self.detail,
        }


class BandwidthLedger:
    """Thread-safe; records are only ever appended."""

    def __init__(self):
        self._records = []
        self._lock = threading.Lock()

    def record(self, kind, elements, metadata=0, participants=(), detail=None) -> LedgerRecord:
        if elements < 0 or metadata < 0:
            raise ValueError("ledger counts are non-negative")
        rec = LedgerRecord(kind, int(elements), int(metadata), tuple(participants), dict(detail or {}))
        with self._lock:
            self._records.append(rec)
        return rec

    @property
    def records(self) -> tuple:
        with self._lock:
            return tuple(self._records)

    def __len__(self):
        return len(self._records)

    @property
    def total_elements(self) -> int:
        return sum(r.elements for r in self.records)

    @property
    def total_metadata(self) -> int:
        return sum(r.metadata for r in self.records)

    def totals_by_kind(self) -> dict:
        c = Counter()
        for r in self.records:
            c[r.kind] += r.elements
        return dict(sorted(c.items()))

    def last(self, kind: str | None = None) -> LedgerRecord | None:
        for r in reversed(self.records):
            if kind is None or r.kind == kind:
                return r
        return None

    def since(self, start: int) -> tuple:
        return self.records[start:]
