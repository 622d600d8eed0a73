"""Verdicts with certificates that can be re-checked without re-running a pipeline."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Status(enum.Enum):
    ZERO = "ZERO"
    NONZERO = "NONZERO"
    INDETERMINATE = "INDETERMINATE"


# certificate kinds
EXPANSION_EMPTY = "expansion-empty"
NONZERO_MONOMIAL = "nonzero-monomial"
FAILED_CONDITION = "failed-necessary-condition"
SG_WITNESS = "sg-witness"
EARLY_NORMALIZATION = "early-normalization"
RESOURCE = "resource"


@dataclass(frozen=True)
class ClaimViolation:
    """A structural claim that did not hold on this input (recorded, never used to decide)."""

    name: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.name}: {self.detail}" if self.detail else self.name


@dataclass(frozen=True)
class Certificate:
    kind: str
    payload: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: Certificate
    diagnostics: tuple[ClaimViolation, ...] = ()
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return self.status is Status.ZERO

    def with_extra(self, diagnostics=(), **info) -> "Verdict":
        merged = dict(self.info)
        merged.update(info)
        return Verdict(self.status, self.certificate, tuple(self.diagnostics) + tuple(diagnostics), merged)
