"""
Main CLI entrypoint for schoolink.

Usage:
    schoolink --version
    schoolink --help
    schoolink ingest --data DIR
    schoolink predict --data DIR --score cooc1 --d inf
    schoolink sweep --data DIR --out results/
    schoolink synth --seed 7 --out corpus/
"""

from __future__ import annotations

import argparse
import logging
import platform
import sys
from typing import Any, Callable, Dict, Optional

from schoolink import __version__
from schoolink.engine.errors import ExitCode, SchoolinkError

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def get_version_string() -> str:
    """Generate a detailed version string."""
    python_version = platform.python_version()
    os_info = f"{platform.system()} {platform.release()}"
    return (
        f"schoolink {__version__}\n"
        f"  python: {python_version}\n"
        f"  platform: {os_info}"
    )


def configure_logging(verbosity: int) -> None:
    """0 -> WARNING, 1 -> INFO, 2+ -> DEBUG, on a single stderr handler."""
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    root = logging.getLogger("schoolink")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False


def _data_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("data")
    group.add_argument("--data", dest="data_dir", default=None,
                       help="Directory with researchers.jsonl and publications.jsonl")
    group.add_argument("--researchers", default=None, help="Researchers JSONL file")
    group.add_argument("--publications", default=None, help="Publications JSONL file")
    group.add_argument("--organisations", default=None,
                       help="Organisation CSV to check affiliations against ('default' for the packaged table). "
                            "Without it DIR/organisations.csv is used when present; "
                            "otherwise the School-to-Faculty check is skipped")
    group.add_argument("--train", dest="train_years", default=None,
                       help="Training years, e.g. 2008-2010 (default: 2008-2010)")
    group.add_argument("--test", dest="test_years", default=None,
                       help="Test years, e.g. 2011-2013 (default: 2011-2013)")
    group.add_argument("--out", default=None, help="Output directory (default: out)")
    group.add_argument("-w", "--workers", dest="max_workers", type=int, default=None,
                       help="Worker threads for distances and sweeps")
    return parent


def _method_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("method")
    group.add_argument("--score", default=None,
                       help="Score kind: path2, common_neighbors, order2_overlap, path_weight_sum, "
                            "jaccard1, jaccard2, adamic_adar, cooc1, cooc2 (or a-d, aa)")
    group.add_argument("--rule", default=None, choices=["auto", "percentile", "median"],
                       help="Threshold rule (default: percentile for co-authorship scores, median otherwise)")
    group.add_argument("--p", dest="p", type=float, default=None, help="Percentile rule parameter in [0, 1]")
    group.add_argument("--d", dest="d", default=None, help="Distance gate: NA, inf or a positive integer")
    group.add_argument("--population", default=None, choices=["all", "candidates"],
                       help="Positive weights the percentile is taken over")
    group.add_argument("--communities", default=None,
                       help="Community counts for the baseline, e.g. 5-8 or 5,6,7")
    return parent


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser for schoolink."""
    parser = argparse.ArgumentParser(
        prog="schoolink",
        description="Predict new cross-School research collaborations from publication records",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  schoolink synth --seed 1 --out corpus/
  schoolink predict --data corpus/ --score common_neighbors --p 0.4
  schoolink predict --data corpus/ --score cooc1 --d inf
  schoolink sweep --data corpus/ --out results/ -v
        """,
    )
    parser.add_argument("--version", action="version", version=get_version_string())
    parser.add_argument("-c", "--config", default=None, help="YAML run configuration (flags override it)")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="Increase verbosity (-v info, -vv debug)")

    data = _data_options()
    method = _method_options()
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    sub.add_parser("ingest", parents=[data], help="Validate a corpus and summarise it per School")
    sub.add_parser("split", parents=[data], help="Write the train and test halves as JSONL")
    sub.add_parser("predict", parents=[data, method], help="Run the link predictor and evaluate it")
    sub.add_parser("baseline", parents=[data, method], help="Run the community-detection baseline")
    evaluate = sub.add_parser("evaluate", parents=[data], help="Evaluate a prediction CSV")
    evaluate.add_argument("prediction", help="CSV with school_k and school_l columns")
    sub.add_parser("sweep", parents=[data, method], help="Evaluate every score and parameter")
    export = sub.add_parser("export", parents=[data, method], help="Write the prediction graph")
    export.add_argument("--format", default=None, choices=["dot", "graphml"], help="Graph format (default: dot)")

    synth = sub.add_parser("synth", help="Generate a synthetic corpus")
    synth.add_argument("--seed", type=int, default=None, help="Random seed (default: 0)")
    synth.add_argument("--schools", dest="n_schools", type=int, default=20)
    synth.add_argument("--researchers", dest="n_researchers", type=int, default=300)
    synth.add_argument("--journals", dest="n_journals", type=int, default=40)
    synth.add_argument("--planted", dest="planted_new_links", type=int, default=12)
    synth.add_argument("--out", default=None, help="Output directory (default: out)")
    return parser


_CONFIG_KEYS = (
    "data_dir", "researchers", "publications", "organisations", "train_years", "test_years",
    "out", "max_workers", "score", "rule", "p", "d", "population", "communities", "format", "seed",
)


def build_config(parsed: argparse.Namespace) -> Any:
    """Defaults, then the --config file, then flags."""
    from schoolink.engine.config import RunConfig

    config = RunConfig.from_yaml(parsed.config) if parsed.config else RunConfig()
    overrides: Dict[str, Any] = {}
    for key in _CONFIG_KEYS:
        if parsed.command == "synth" and key == "researchers":
            continue
        value = getattr(parsed, key, None)
        if value is not None:
            overrides[key] = value
    return config.merged(overrides, source="command line")


def _cmd_ingest(runner: Any, parsed: argparse.Namespace) -> int:
    summary = runner.run_ingest()
    corpus = runner.corpus
    print(f"{len(corpus.researchers)} researchers, {len(corpus.publications)} publications, "
          f"{len(corpus.schools)} schools, {len(corpus.journals)} journals")
    width = max([len(s) for s in summary] + [6])
    print(f"{'school'.ljust(width)}  {'staff':>6}  {'publications':>12}")
    for school, counts in summary.items():
        print(f"{school.ljust(width)}  {counts['staff']:>6}  {counts['publications']:>12}")
    return ExitCode.SUCCESS


def _cmd_split(runner: Any, parsed: argparse.Namespace) -> int:
    train, test = runner.run_split()
    split = runner.split
    print(f"train: {len(split.train.publications)} publications -> {train}")
    print(f"test: {len(split.test.publications)} publications -> {test}")
    if split.dropped:
        print(f"dropped: {split.dropped} publications outside both periods")
    return ExitCode.SUCCESS


def _print_report(label: str, report: Any) -> None:
    print(
        f"{label}: {report.n_predicted} predicted, {report.n_correct} correct, "
        f"m_new={report.m_new}, candidates={report.n_candidates}, "
        f"accuracy={report.accuracy:.3f}, recall={report.recall:.3f}, "
        f"random guess={report.random_guess_accuracy:.3f}"
    )


def _cmd_predict(runner: Any, parsed: argparse.Namespace) -> int:
    prediction, report = runner.run_predict()
    _print_report(f"{runner.config.score.value} {prediction.rule.label} (threshold {prediction.threshold_value:.6g})", report)
    return ExitCode.SUCCESS


def _cmd_baseline(runner: Any, parsed: argparse.Namespace) -> int:
    table = runner.run_baseline()
    n, q = runner.context.dendrogram.optimal_cut()
    print(f"modularity peak: Q={q:.4f} at {n} communities")
    for row in table.rows:
        _print_report(f"community {row.parameter}", row.report)
    return ExitCode.SUCCESS


def _cmd_evaluate(runner: Any, parsed: argparse.Namespace) -> int:
    _print_report(parsed.prediction, runner.run_evaluate(parsed.prediction))
    return ExitCode.SUCCESS


def _cmd_sweep(runner: Any, parsed: argparse.Namespace) -> int:
    print(runner.run_sweep().to_text(), end="")
    return ExitCode.SUCCESS


def _cmd_export(runner: Any, parsed: argparse.Namespace) -> int:
    print(runner.run_export())
    return ExitCode.SUCCESS


_COMMANDS: Dict[str, Callable[[Any, argparse.Namespace], int]] = {
    "ingest": _cmd_ingest,
    "split": _cmd_split,
    "predict": _cmd_predict,
    "baseline": _cmd_baseline,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "export": _cmd_export,
}


def _cmd_synth(config: Any, parsed: argparse.Namespace) -> int:
    from schoolink.synth import generate_corpus

    result = generate_corpus(
        seed=config.seed,
        n_schools=parsed.n_schools,
        n_researchers=parsed.n_researchers,
        n_journals=parsed.n_journals,
        planted_new_links=parsed.planted_new_links,
        out=config.out,
    )
    corpus = result.corpus
    print(f"{len(corpus.researchers)} researchers, {len(corpus.publications)} publications, "
          f"{len(result.planted)} planted links -> {config.out}")
    return ExitCode.SUCCESS


def main(args: Optional[list[str]] = None) -> int:
    """Main entrypoint for schoolink CLI."""
    parser = create_parser()
    try:
        parsed = parser.parse_args(args)
    except SystemExit as e:
        # argparse exits 0 after --help/--version and 2 on a usage error
        return ExitCode.SUCCESS if e.code in (0, None) else ExitCode.VALIDATION_ERROR

    if not parsed.command:
        parser.print_help()
        return ExitCode.SUCCESS

    configure_logging(parsed.verbose)

    try:
        config = build_config(parsed)
        config.validate()
        if parsed.command == "synth":
            return _cmd_synth(config, parsed)

        from schoolink.engine.runner import PipelineRunner

        return _COMMANDS[parsed.command](PipelineRunner(config), parsed)
    except SchoolinkError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return int(e.exit_code)
    except OSError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return ExitCode.IO_ERROR
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return ExitCode.KEYBOARD_INTERRUPT


if __name__ == "__main__":
    sys.exit(main())
