"""
Prediction accuracy, recall and the random-guess baseline, plus the
parameter sweep that fills the full results table.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Collection, Iterable, Optional, Sequence, Union

from schoolink.engine.context import SplitContext
from schoolink.engine.errors import ValidationError
from schoolink.engine.predictor import Population, Prediction, ThresholdRule
from schoolink.engine.results import EvalReport, MethodFamily, SweepRow, SweepTable
from schoolink.ingest.corpus import YearSplit
from schoolink.network.school import DistanceGate, SchoolEdgeSet, SchoolPair
from schoolink.network.similarity import BIPARTITE_KINDS, COAUTHOR_KINDS, ScoreFamily, ScoreKind
from schoolink.platform.concurrency import run_parallel_threads

logger = logging.getLogger(__name__)

DEFAULT_PERCENTILES: tuple[float, ...] = (1.0, 0.4, 0.3, 0.2)
DEFAULT_GATES: tuple[str, ...] = ("NA", "inf", "10", "4")
DEFAULT_COMMUNITIES: tuple[int, ...] = (5, 6, 7, 8)


def evaluate(
    pred: Union[SchoolEdgeSet, Prediction],
    new_edges: SchoolEdgeSet,
    candidates: Collection[SchoolPair],
) -> EvalReport:
    """
    Score a prediction against E^new.

    accuracy = |pred & new| / |pred| and recall = |pred & new| / m_new, both 0
    on an empty denominator; the random-guess accuracy is m_new / |candidates|.
    """
    edges = pred.edges if isinstance(pred, Prediction) else pred
    candidate_set = set(candidates)
    outside = edges.pairs - candidate_set
    if outside:
        listing = ", ".join(f"{k}-{l}" for k, l in sorted(outside)[:5])
        raise ValidationError(
            f"{len(outside)} predicted pair(s) are not candidates", f"e.g. {listing}"
        )
    if not new_edges.pairs <= candidate_set:
        logger.warning("%d new edge(s) fall outside the candidate pairs", len(new_edges.pairs - candidate_set))

    n_predicted = len(edges)
    n_correct = len(edges.pairs & new_edges.pairs)
    m_new = len(new_edges)
    n_candidates = len(candidate_set)
    return EvalReport(
        n_predicted=n_predicted,
        n_correct=n_correct,
        m_new=m_new,
        n_candidates=n_candidates,
        accuracy=n_correct / n_predicted if n_predicted else 0.0,
        recall=n_correct / m_new if m_new else 0.0,
        random_guess_accuracy=m_new / n_candidates if n_candidates else 0.0,
    )


@dataclass(frozen=True)
class SweepCell:
    """One requested row: a score kind with p (or d), or the baseline with N."""

    family: MethodFamily
    kind: Optional[ScoreKind]
    value: Union[float, DistanceGate, int]


def sweep(
    split: Union[YearSplit, SplitContext],
    scores: Optional[Iterable[Union[ScoreKind, str]]] = None,
    percentiles: Sequence[float] = DEFAULT_PERCENTILES,
    gates: Sequence[Union[str, int, float, None, DistanceGate]] = DEFAULT_GATES,
    communities: Sequence[int] = DEFAULT_COMMUNITIES,
    population: Union[Population, str] = Population.ALL,
    max_workers: Optional[int] = None,
) -> SweepTable:
    """
    Evaluate every (score, parameter) combination.

    Co-authorship scores run the percentile rule for each p; journal-based
    scores run the median rule behind each distance gate d; the community
    baseline runs for each N. Rows come back in that order.
    """
    ctx = split if isinstance(split, SplitContext) else SplitContext(split, max_workers)
    kinds = [k if isinstance(k, ScoreKind) else ScoreKind.parse(k) for k in (scores or ScoreKind)]
    population = Population(population)

    cells: list[SweepCell] = []
    for kind in (k for k in COAUTHOR_KINDS if k in kinds):
        cells += [SweepCell(MethodFamily.COAUTHOR, kind, float(p)) for p in percentiles]
    for kind in (k for k in BIPARTITE_KINDS if k in kinds):
        cells += [SweepCell(MethodFamily.BIPARTITE, kind, DistanceGate.parse(d)) for d in gates]
    n_schools = len(ctx.split.train.schools)
    for n in communities:
        if 1 <= n <= n_schools:
            cells.append(SweepCell(MethodFamily.COMMUNITY, None, int(n)))
        else:
            logger.warning("Skipping N=%d: the corpus has %d schools", n, n_schools)

    ctx.prepare()
    results = run_parallel_threads(lambda cell: _run_cell(ctx, cell, population), cells, max_workers)
    table = SweepTable()
    for result in results:
        table.add(result.unwrap())
    logger.info("Sweep finished: %d rows", len(table))
    return table


def _run_cell(ctx: SplitContext, cell: SweepCell, population: Population) -> SweepRow:
    if cell.family is MethodFamily.COMMUNITY:
        assert isinstance(cell.value, int)
        edges = ctx.baseline(cell.value)
        report = evaluate(edges, ctx.new_edges, ctx.candidates)
        return SweepRow(cell.family, "community", f"N={cell.value}", report)

    assert cell.kind is not None
    if cell.kind.family is ScoreFamily.COAUTHOR:
        assert isinstance(cell.value, float)
        prediction = ctx.predict(cell.kind, ThresholdRule.percentile(cell.value, population))
        parameter = prediction.rule.label
    else:
        prediction = ctx.predict(cell.kind, ThresholdRule.median(), cell.value)
        parameter = f"d={cell.value}"
    report = evaluate(prediction, ctx.new_edges, ctx.candidates)
    return SweepRow(cell.family, cell.kind.value, parameter, report, prediction.threshold_value)
