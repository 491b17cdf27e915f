"""
Researcher and publication records.

A Researcher is a member of staff with one or more School-level
affiliations; a PublicationRecord is one journal output with its
in-university authors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from schoolink.engine.errors import ValidationError


@dataclass(frozen=True, order=True)
class YearInterval:
    """Closed interval of calendar years, e.g. 2008-2010."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValidationError(f"Year interval {self.start}-{self.end} is empty")

    @classmethod
    def parse(cls, text: str) -> YearInterval:
        """Parse ``2008-2010``, ``2008:2010`` or a single year ``2012``."""
        raw = text.strip()
        for sep in ("-", ":", ".."):
            if sep in raw:
                lo, _, hi = raw.partition(sep)
                break
        else:
            lo = hi = raw
        try:
            return cls(int(lo), int(hi))
        except ValueError:
            raise ValidationError(f"Invalid year interval: {text!r}") from None

    def __contains__(self, year: object) -> bool:
        return isinstance(year, int) and self.start <= year <= self.end

    def overlaps(self, other: YearInterval) -> bool:
        return self.start <= other.end and other.start <= self.end

    def __str__(self) -> str:
        return f"{self.start}-{self.end}"


@dataclass(frozen=True)
class Researcher:
    """A member of staff and their School-level affiliations S(i)."""

    researcher_id: str
    schools: frozenset[str]
    faculties: frozenset[str]

    def to_dict(self) -> dict[str, Any]:
        return {
            "researcher_id": self.researcher_id,
            "schools": sorted(self.schools),
            "faculties": sorted(self.faculties),
        }


@dataclass(frozen=True)
class PublicationRecord:
    """One journal output. ``journal`` is empty when it is unknown."""

    pub_id: str
    year: int
    journal: str
    authors: frozenset[str] = field(default_factory=frozenset)

    @property
    def has_journal(self) -> bool:
        return bool(self.journal)

    def to_dict(self) -> dict[str, Any]:
        return {
            "pub_id": self.pub_id,
            "year": self.year,
            "journal": self.journal,
            "authors": sorted(self.authors),
        }
