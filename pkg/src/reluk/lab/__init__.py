"""Desk-scale approximation experiments: polynomial / dictionary fitting,
exact compilation of the fitted competitors, and rate checks."""

from .targets import DictionaryElement, TargetFunction, make_target
from .chebfit import chebyshev_fit
from .greedy import GreedyResult, greedy_fit, make_dictionary
from .experiments import (
    ExperimentReport,
    run_analytic_experiment,
    run_sobolev_experiment,
    run_variation_experiment,
)

__all__ = [
    "DictionaryElement",
    "TargetFunction",
    "make_target",
    "chebyshev_fit",
    "GreedyResult",
    "greedy_fit",
    "make_dictionary",
    "ExperimentReport",
    "run_analytic_experiment",
    "run_sobolev_experiment",
    "run_variation_experiment",
]
