from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Boolean outcome of a check, with the first failing item when false."""

    ok: bool
    certificate: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "certificate": self.certificate, "details": self.details}
