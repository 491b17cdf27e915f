"""
Schoolink Result Classes

Data structures for evaluation reports and sweep tables.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List

from schoolink.engine.templating import render


class MethodFamily(Enum):
    """Which group of methods a sweep row belongs to."""
    COAUTHOR = "coauthor"
    BIPARTITE = "bipartite"
    COMMUNITY = "community"


@dataclass(frozen=True)
class EvalReport:
    """Prediction quality against the links that are new in the test period."""

    n_predicted: int
    n_correct: int
    m_new: int
    n_candidates: int
    accuracy: float
    recall: float
    random_guess_accuracy: float

    @property
    def exact_accuracy(self) -> Fraction:
        if self.n_predicted == 0:
            return Fraction(0)
        return Fraction(self.n_correct, self.n_predicted)

    @property
    def exact_recall(self) -> Fraction:
        if self.m_new == 0:
            return Fraction(0)
        return Fraction(self.n_correct, self.m_new)

    @property
    def beats_random(self) -> bool:
        return self.accuracy > self.random_guess_accuracy

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON output."""
        return {
            "n_predicted": self.n_predicted,
            "n_correct": self.n_correct,
            "m_new": self.m_new,
            "n_candidates": self.n_candidates,
            "accuracy": self.accuracy,
            "recall": self.recall,
            "random_guess_accuracy": self.random_guess_accuracy,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        row = self.to_dict()
        writer.writerow(list(row))
        writer.writerow([_cell(v) for v in row.values()])
        return buf.getvalue()


@dataclass(frozen=True)
class SweepRow:
    """One (score, parameter) cell of the results table."""

    family: MethodFamily
    method: str
    parameter: str
    report: EvalReport
    threshold: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "family": self.family.value,
            "method": self.method,
            "parameter": self.parameter,
            "threshold": self.threshold,
        }
        out.update(self.report.to_dict())
        return out


@dataclass
class SweepTable:
    """Rows of a parameter sweep in the order they were requested."""

    rows: List[SweepRow] = field(default_factory=list)

    def add(self, row: SweepRow) -> None:
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def by_family(self, family: MethodFamily) -> List[SweepRow]:
        return [r for r in self.rows if r.family is family]

    @property
    def random_guess_accuracy(self) -> float:
        return self.rows[0].report.random_guess_accuracy if self.rows else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = [
            "family", "method", "parameter", "threshold", "n_predicted", "n_correct",
            "m_new", "n_candidates", "accuracy", "recall", "random_guess_accuracy",
        ]
        writer.writerow(header)
        for row in self.rows:
            d = row.to_dict()
            writer.writerow([_cell(d[h]) for h in header])
        return buf.getvalue()

    def to_text(self) -> str:
        """Aligned table grouped by family: edges / accuracy / recall per row."""
        groups = []
        for family in MethodFamily:
            rows = self.by_family(family)
            if rows:
                groups.append({"name": family.value, "rows": rows})
        width = max([len(r.method) for r in self.rows] + [6])
        first = self.rows[0].report if self.rows else None
        return render(
            "sweep_table.txt.j2",
            {
                "groups": groups,
                "width": width,
                "m_new": first.m_new if first else 0,
                "n_candidates": first.n_candidates if first else 0,
                "random_guess": self.random_guess_accuracy,
            },
        )


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    return value
