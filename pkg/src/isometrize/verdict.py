"""Three-valued verdicts with witnesses.

``INDETERMINATE`` arises on windowed (horizon) instances when a decision
depends on points beyond the frontier.  ``qualified`` marks verdicts that only
quantify over an enumerated (capped or windowed) subset of the group.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable


class Status(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: Any = None
    qualified: bool = False
    note: str = ""
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.status is Status.PASS

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL

    @property
    def refuted(self) -> bool:
        return self.status is Status.FAIL

    @classmethod
    def ok(cls, note="", qualified=False, **details):
        return cls(Status.PASS, None, qualified, note, details)

    @classmethod
    def fail(cls, witness, note="", qualified=False, **details):
        return cls(Status.FAIL, witness, qualified, note, details)

    @classmethod
    def unknown(cls, witness=None, note="", qualified=False, **details):
        return cls(Status.INDETERMINATE, witness, qualified, note, details)

    @classmethod
    def of(cls, flag: bool, witness=None, note="", qualified=False):
        """PASS when ``flag`` holds; otherwise FAIL with ``witness`` and ``note``."""
        if flag:
            return cls.ok(qualified=qualified)
        return cls.fail(witness, note, qualified)


def tri(value) -> Status:
    """Map ``True``/``False``/``None`` to a status."""
    if value is None:
        return Status.INDETERMINATE
    return Status.PASS if value else Status.FAIL


def combine(verdicts: Iterable[Verdict], note="") -> Verdict:
    """Conjunction: first FAIL wins, then first INDETERMINATE, else PASS."""
    unknown = None
    qualified = False
    for v in verdicts:
        qualified = qualified or v.qualified
        if v.status is Status.FAIL:
            return Verdict(Status.FAIL, v.witness, qualified, note or v.note)
        if v.status is Status.INDETERMINATE and unknown is None:
            unknown = v
    if unknown is not None:
        return Verdict(Status.INDETERMINATE, unknown.witness, qualified, note or unknown.note)
    return Verdict(Status.PASS, None, qualified, note)
