# Copyright (c) 2024 Schoolink Contributors
# MIT License

"""
Schoolink: cross-school collaboration link prediction.

Scores pairs of researchers from co-authorship and researcher-journal data,
aggregates the scores to the School level, thresholds them, and evaluates
the predicted School pairs against a later publication period.

Features:
    - Four co-authorship neighbourhood scores and five researcher-journal scores
    - Percentile and median-of-existing thresholds
    - Modularity community-detection baseline with dendrogram cuts
    - DOT/GraphML export and a synthetic corpus generator

This package exposes release metadata; the CLI lives in ``schoolink.cli``.
"""

from __future__ import annotations

from schoolink.release import __author__, __version__

__all__ = [
    "__author__",
    "__version__",
]
