"""
Threshold rules that turn School-pair weights into predicted links.

Both rules only ever select pairs outside E^train:

- percentile: pi is the nearest-rank 100(1-p)th percentile of the positive
  weights and pairs with w >= pi are selected (p = 1 selects every positive
  pair);
- median: pi is the median weight of the pairs already in E^train and
  pairs with w > pi are selected.
"""

from __future__ import annotations

import csv
import enum
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from schoolink.engine.errors import ValidationError
from schoolink.network.school import SchoolEdgeSet, SchoolPair, SchoolWeights

logger = logging.getLogger(__name__)

# Guards ceil() against (1 - p) * N landing a hair above an integer.
_RANK_EPS = 1e-9


class RuleKind(str, enum.Enum):
    PERCENTILE = "percentile"
    MEDIAN = "median"


class Population(str, enum.Enum):
    """Which positive weights the percentile is taken over."""

    ALL = "all"
    CANDIDATES = "candidates"


@dataclass(frozen=True)
class ThresholdRule:
    kind: RuleKind
    p: Optional[float] = None
    population: Population = Population.ALL

    def __post_init__(self) -> None:
        if self.kind is RuleKind.PERCENTILE:
            if self.p is None or isinstance(self.p, bool) or not 0.0 <= float(self.p) <= 1.0:
                raise ValidationError(f"percentile rule needs 0 <= p <= 1, got {self.p!r}")
            object.__setattr__(self, "p", float(self.p))

    @classmethod
    def percentile(cls, p: float, population: Population | str = Population.ALL) -> ThresholdRule:
        return cls(RuleKind.PERCENTILE, p, Population(population))

    @classmethod
    def median(cls) -> ThresholdRule:
        return cls(RuleKind.MEDIAN)

    @property
    def label(self) -> str:
        if self.kind is RuleKind.MEDIAN:
            return "median"
        return f"p={self.p:g}"


@dataclass(frozen=True, eq=False)
class Prediction:
    """E^pred with the weights and threshold that produced it."""

    edges: SchoolEdgeSet
    weights: dict[SchoolPair, float]
    rule: ThresholdRule
    threshold_value: float
    ranks: dict[SchoolPair, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        ordered = sorted(self.edges, key=lambda pair: (-self.weights.get(pair, 0.0), pair))
        object.__setattr__(self, "ranks", {pair: r for r, pair in enumerate(ordered, 1)})

    def __len__(self) -> int:
        return len(self.edges)

    def ranked(self) -> Iterator[tuple[int, SchoolPair, float]]:
        """(rank, pair, weight), highest weight first."""
        for pair, r in sorted(self.ranks.items(), key=lambda item: item[1]):
            yield r, pair, self.weights.get(pair, 0.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["school_k", "school_l", "weight", "rank"])
        for r, (k, l), w in self.ranked():
            writer.writerow([k, l, repr(w), r])
        return buf.getvalue()


def nearest_rank(values: list[float], q: float) -> float:
    """Nearest-rank q-quantile (0 < q <= 1) of a nonempty list."""
    ordered = sorted(values)
    rank = max(1, math.ceil(q * len(ordered) - _RANK_EPS))
    return ordered[rank - 1]


def predict_percentile(
    w: SchoolWeights,
    train: SchoolEdgeSet,
    p: float,
    population: Population | str = Population.ALL,
) -> Prediction:
    """Select non-train pairs whose weight reaches the 100(1-p)th percentile."""
    rule = ThresholdRule.percentile(p, population)
    positive = [(pair, weight) for pair, weight in w.items()]
    if rule.population is Population.CANDIDATES:
        pool = [weight for pair, weight in positive if pair not in train.pairs]
    else:
        pool = [weight for _, weight in positive]

    if not pool or rule.p == 1.0:
        pi = 0.0
    else:
        pi = nearest_rank(pool, 1.0 - rule.p)

    if rule.p == 1.0:
        chosen = {pair: weight for pair, weight in positive if pair not in train.pairs}
    elif not pool:
        chosen = {}
    else:
        chosen = {pair: weight for pair, weight in positive if weight >= pi and pair not in train.pairs}
    return _prediction(chosen, rule, pi)


def predict_median(w: SchoolWeights, train: SchoolEdgeSet) -> Prediction:
    """Select non-train pairs weighing more than the median train-pair weight."""
    rule = ThresholdRule.median()
    train_weights = [w.get(k, l) for k, l in train]
    pi = float(np.median(train_weights)) if train_weights else 0.0
    chosen = {pair: weight for pair, weight in w.items() if weight > pi and pair not in train.pairs}
    return _prediction(chosen, rule, pi)


def predict(w: SchoolWeights, train: SchoolEdgeSet, rule: ThresholdRule) -> Prediction:
    if rule.kind is RuleKind.MEDIAN:
        return predict_median(w, train)
    assert rule.p is not None
    return predict_percentile(w, train, rule.p, rule.population)


def _prediction(chosen: dict[SchoolPair, float], rule: ThresholdRule, pi: float) -> Prediction:
    logger.info("%s: threshold %.6g, %d predicted edge(s)", rule.label, pi, len(chosen))
    return Prediction(SchoolEdgeSet(frozenset(chosen)), chosen, rule, pi)
