"""
Graph export of a prediction against the links that are new in the test period.

Edges are E^pred together with E^new:

- predicted edges are solid, with width 0.2 plus a share of
  ``MAX_EXTRA_WIDTH`` proportional to w_kl;
- new edges that were not predicted are dashed with width 0.2;
- edges in E^new are coloured on a red-to-blue ramp by w_kl of the same
  score recomputed on the test half (min-max normalised, bluer is
  heavier); false positives are grey.

Nodes are every School in the corpus, coloured by Faculty.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Union

import networkx as nx

from schoolink.engine.errors import ValidationError
from schoolink.engine.predictor import Prediction
from schoolink.engine.templating import render
from schoolink.ingest.corpus import Corpus
from schoolink.ingest.organisations import OrganisationTable
from schoolink.network.school import SchoolEdgeSet, SchoolWeights
from schoolink.platform.fs import atomic_write

logger = logging.getLogger(__name__)

Color = tuple[int, int, int]

RAMP_LOW: Color = (178, 24, 43)
RAMP_HIGH: Color = (33, 102, 172)
GREY: Color = (150, 150, 150)
BASE_WIDTH = 0.2
MAX_EXTRA_WIDTH = 4.0

FACULTY_PALETTE: tuple[Color, ...] = (
    (27, 158, 119),
    (217, 95, 2),
    (117, 112, 179),
    (231, 41, 138),
    (102, 166, 30),
    (230, 171, 2),
    (166, 118, 29),
    (102, 102, 102),
)


class ExportFormat(str, enum.Enum):
    DOT = "dot"
    GRAPHML = "graphml"

    @classmethod
    def parse(cls, text: str) -> ExportFormat:
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValidationError(f"Unknown export format {text!r}", "choose dot or graphml") from None

    @property
    def suffix(self) -> str:
        return f".{self.value}"


@dataclass(frozen=True)
class ExportNode:
    school: str
    faculty: str
    color: Color


@dataclass(frozen=True)
class ExportEdge:
    k: str
    l: str
    status: str
    style: str
    width: float
    color: Color
    weight: float
    test_weight: float


@dataclass(frozen=True)
class ComparisonGraph:
    name: str
    nodes: tuple[ExportNode, ...]
    edges: tuple[ExportEdge, ...]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph(name=self.name)
        for node in self.nodes:
            g.add_node(node.school, faculty=node.faculty, color=_hex(node.color))
        for e in self.edges:
            g.add_edge(
                e.k,
                e.l,
                status=e.status,
                style=e.style,
                width=e.width,
                color=_hex(e.color),
                weight=e.weight,
                test_weight=e.test_weight,
            )
        return g

    def to_dot(self) -> str:
        return render(
            "comparison.dot.j2",
            {"name": self.name, "nodes": list(self.nodes), "edges": list(self.edges)},
        )

    def to_graphml(self) -> str:
        return "\n".join(nx.generate_graphml(self.to_networkx())) + "\n"

    def write(self, path: Union[str, Path], fmt: Union[ExportFormat, str] = ExportFormat.DOT) -> Path:
        fmt = fmt if isinstance(fmt, ExportFormat) else ExportFormat.parse(fmt)
        content = self.to_dot() if fmt is ExportFormat.DOT else self.to_graphml()
        out = atomic_write(path, content)
        logger.info("Wrote %s (%d nodes, %d edges)", out, len(self.nodes), len(self.edges))
        return out


def ramp(t: float) -> Color:
    """Linear RGB interpolation from RAMP_LOW (t=0) to RAMP_HIGH (t=1)."""
    t = min(1.0, max(0.0, t))
    return tuple(round(lo + (hi - lo) * t) for lo, hi in zip(RAMP_LOW, RAMP_HIGH))  # type: ignore[return-value]


def school_faculties(corpus: Corpus, organisations: Optional[OrganisationTable] = None) -> dict[str, str]:
    """Faculty per School from the organisation table, else from the researchers' records."""
    listed: dict[str, set[str]] = {}
    for r in corpus.researchers.values():
        for s in r.schools:
            listed.setdefault(s, set()).update(r.faculties)
    out = {}
    for school in sorted(corpus.schools):
        faculty = organisations.faculty_of(school) if organisations is not None else None
        out[school] = faculty or min(listed.get(school, {""}))
    return out


def comparison_graph(
    pred: Prediction,
    new_edges: SchoolEdgeSet,
    test_weights: Union[SchoolWeights, Mapping[tuple[str, str], float]],
    faculties: Mapping[str, str],
    name: str = "schoolink",
) -> ComparisonGraph:
    """Lay out E^pred and E^new with the encoding described in the module docstring."""
    faculty_names = sorted(set(faculties.values()))
    palette = {f: FACULTY_PALETTE[i % len(FACULTY_PALETTE)] for i, f in enumerate(faculty_names)}
    nodes = tuple(ExportNode(s, faculties[s], palette[faculties[s]]) for s in sorted(faculties))

    def test_weight(k: str, l: str) -> float:
        if isinstance(test_weights, SchoolWeights):
            return test_weights.get(k, l)
        return float(test_weights.get((k, l), 0.0))

    new_w = {pair: test_weight(*pair) for pair in new_edges}
    lo, hi = (min(new_w.values()), max(new_w.values())) if new_w else (0.0, 0.0)
    max_pred = max((pred.weights.get(p, 0.0) for p in pred.edges), default=0.0)

    edges = []
    for pair in sorted(pred.edges.pairs | new_edges.pairs):
        k, l = pair
        weight = pred.weights.get(pair, 0.0)
        if pair in new_w:
            color = ramp((new_w[pair] - lo) / (hi - lo) if hi > lo else 1.0)
        else:
            color = GREY
        if pair in pred.edges.pairs:
            extra = MAX_EXTRA_WIDTH * weight / max_pred if max_pred > 0 else 0.0
            status = "correct" if pair in new_w else "false_positive"
            edges.append(ExportEdge(k, l, status, "solid", BASE_WIDTH + extra, color, weight, new_w.get(pair, 0.0)))
        else:
            edges.append(ExportEdge(k, l, "missed", "dashed", BASE_WIDTH, color, weight, new_w[pair]))
    return ComparisonGraph(name, nodes, tuple(edges))


def _hex(color: Color) -> str:
    return "#{:02x}{:02x}{:02x}".format(*color)
