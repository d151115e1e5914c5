"""Metagrammar descent for syntax-guided synthesis."""

from ._mgsynth import (
    Grammar,
    MaterializeError,
    Metagrammar,
    ParseError,
    Problem,
    UnsupportedError,
    default_metagrammar,
    emit,
    enhanced_metagrammar,
    materialize,
    neighbors,
    parse_metagrammar,
    parse_problem,
    print_problem,
    run_cli,
    scan_corpus,
    score_benchmark,
    score_metagrammar,
    solve,
    stratified_sample,
    verify,
)

__all__ = [
    "Grammar",
    "MaterializeError",
    "Metagrammar",
    "ParseError",
    "Problem",
    "UnsupportedError",
    "default_metagrammar",
    "emit",
    "enhanced_metagrammar",
    "materialize",
    "neighbors",
    "parse_metagrammar",
    "parse_problem",
    "print_problem",
    "run_cli",
    "scan_corpus",
    "score_benchmark",
    "score_metagrammar",
    "solve",
    "stratified_sample",
    "verify",
]
