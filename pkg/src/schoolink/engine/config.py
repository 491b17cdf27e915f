"""
Run Configuration

Every pipeline parameter in one dataclass. Values come from defaults, an
optional YAML file and then command-line flags, in that order.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from schoolink.engine.errors import ConfigError, SchoolinkError
from schoolink.engine.predictor import Population, RuleKind
from schoolink.export import ExportFormat
from schoolink.ingest.records import YearInterval
from schoolink.network.school import DistanceGate
from schoolink.network.similarity import ScoreFamily, ScoreKind
from schoolink.platform.fs import read_file


@dataclass
class RunConfig:
    """
    Configuration for one pipeline run.

    Attributes:
        data_dir: Directory holding researchers.jsonl and publications.jsonl
        researchers: Researchers file (overrides data_dir)
        publications: Publications file (overrides data_dir)
        organisations: Organisation CSV; "default" uses the packaged table,
            None picks up organisations.csv in data_dir when present and
            otherwise skips the affiliation check
        train_years: Training period
        test_years: Test period
        score: Researcher-pair score kind
        rule: "percentile", "median" or "auto" (percentile for co-authorship
            scores, median for journal-based ones)
        p: Percentile rule parameter
        d: Distance gate for journal-based scores (NA, inf or an integer)
        population: Positive weights the percentile is taken over
        communities: Community counts N for the baseline
        out: Output directory
        seed: Random seed for ``synth``
        format: Graph export format
        max_workers: Thread pool size (None = library default)
    """

    data_dir: Optional[str] = None
    researchers: Optional[str] = None
    publications: Optional[str] = None
    organisations: Optional[str] = None
    train_years: YearInterval = field(default_factory=lambda: YearInterval(2008, 2010))
    test_years: YearInterval = field(default_factory=lambda: YearInterval(2011, 2013))
    score: ScoreKind = ScoreKind.COMMON_NEIGHBORS
    rule: str = "auto"
    p: float = 1.0
    d: DistanceGate = field(default_factory=lambda: DistanceGate(float("inf")))
    population: Population = Population.ALL
    communities: List[int] = field(default_factory=lambda: [5, 6, 7, 8])
    out: str = "out"
    seed: int = 0
    format: ExportFormat = ExportFormat.DOT
    max_workers: Optional[int] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any], source: Optional[str] = None) -> RunConfig:
        return cls().merged(data, source)

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> RunConfig:
        """Load a YAML mapping of RunConfig fields."""
        try:
            data = yaml.safe_load(read_file(path))
        except yaml.YAMLError as e:
            raise ConfigError(f"invalid YAML: {e}", str(path)) from None
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("top level must be a mapping", str(path))
        return cls.from_dict(data, str(path))

    def merged(self, overrides: Dict[str, Any], source: Optional[str] = None) -> RunConfig:
        """Copy with ``overrides`` applied; ``None`` values are skipped."""
        names = {f.name for f in dataclasses.fields(self)}
        unknown = sorted(set(overrides) - names)
        if unknown:
            raise ConfigError(f"unknown key(s): {', '.join(unknown)}", source)
        values: Dict[str, Any] = {}
        for key, value in overrides.items():
            if value is None:
                continue
            try:
                values[key] = _coerce(key, value)
            except (SchoolinkError, TypeError, ValueError) as e:
                message = e.message if isinstance(e, SchoolinkError) else str(e)
                raise ConfigError(f"{key}: {message}", source) from None
        return dataclasses.replace(self, **values)

    @property
    def researchers_path(self) -> Path:
        if self.researchers:
            return Path(self.researchers)
        return Path(self.data_dir or ".") / "researchers.jsonl"

    @property
    def publications_path(self) -> Path:
        if self.publications:
            return Path(self.publications)
        return Path(self.data_dir or ".") / "publications.jsonl"

    @property
    def organisations_source(self) -> Optional[str]:
        if self.organisations is not None:
            return self.organisations
        if self.data_dir and (Path(self.data_dir) / "organisations.csv").is_file():
            return str(Path(self.data_dir) / "organisations.csv")
        return None

    @property
    def rule_kind(self) -> RuleKind:
        if self.rule == "auto":
            return RuleKind.PERCENTILE if self.score.family is ScoreFamily.COAUTHOR else RuleKind.MEDIAN
        return RuleKind(self.rule)

    def validate(self) -> None:
        """Raise ConfigError when a parameter breaks a module contract."""
        if self.train_years.overlaps(self.test_years):
            raise ConfigError(f"train years {self.train_years} overlap test years {self.test_years}")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        if self.rule not in ("auto", "percentile", "median"):
            raise ConfigError(f"rule must be auto, percentile or median, got {self.rule!r}")
        if not self.communities or any(n < 1 for n in self.communities):
            raise ConfigError(f"communities must be positive integers, got {self.communities}")
        if self.max_workers is not None and self.max_workers < 1:
            raise ConfigError(f"max_workers must be positive, got {self.max_workers}")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "data_dir": self.data_dir,
            "researchers": self.researchers,
            "publications": self.publications,
            "organisations": self.organisations,
            "train_years": str(self.train_years),
            "test_years": str(self.test_years),
            "score": self.score.value,
            "rule": self.rule,
            "p": self.p,
            "d": str(self.d),
            "population": self.population.value,
            "communities": list(self.communities),
            "out": self.out,
            "seed": self.seed,
            "format": self.format.value,
            "max_workers": self.max_workers,
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


def _coerce(key: str, value: Any) -> Any:
    if key in ("train_years", "test_years"):
        return value if isinstance(value, YearInterval) else YearInterval.parse(str(value))
    if key == "score":
        return value if isinstance(value, ScoreKind) else ScoreKind.parse(str(value))
    if key == "d":
        return DistanceGate.parse(value)
    if key == "population":
        return Population(str(value).lower())
    if key == "format":
        return value if isinstance(value, ExportFormat) else ExportFormat.parse(str(value))
    if key == "communities":
        return _int_list(value)
    if key == "p":
        if isinstance(value, bool):
            raise TypeError("must be a number")
        return float(value)
    if key in ("seed", "max_workers"):
        if isinstance(value, bool) or int(value) != value:
            raise TypeError("must be an integer")
        return int(value)
    if key == "rule":
        return str(value).lower()
    return str(value)


def _int_list(value: Any) -> List[int]:
    """Accept a list, a single int, ``"5,6,7"`` or a range ``"5-8"``."""
    if isinstance(value, int) and not isinstance(value, bool):
        return [value]
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    text = str(value).strip()
    if "," in text:
        return [int(v) for v in text.split(",") if v.strip()]
    interval = YearInterval.parse(text)
    return list(range(interval.start, interval.end + 1))
