"""Multiobjective differential evolution for wrapper feature selection.

The package searches for feature subsets that jointly minimise the fraction
of selected features and the k-NN classification error. The main entry point
is :func:`modefs.engine.run`; the building blocks (dataset handling, the
wrapper evaluator, feature statistics, the three evolutionary stages and the
quality indicators) are importable on their own.
"""

from modefs.classify import Evaluator, ObjectivePair, evaluate, holdout_error, knn_predict
from modefs.data import Dataset, load_csv, normalize, stratified_split
from modefs.engine import BatchResult, RunConfig, RunResult, export, run, run_batch
from modefs.evo_core import Front, Individual, Population, decode, dominates, encode, nondominated_sort
from modefs.metrics import ReferenceFront, exhaustive_pareto, hypervolume, igd
from modefs.stats import FeatureStats, compute_feature_stats

__all__ = [
    "BatchResult",
    "Dataset",
    "Evaluator",
    "FeatureStats",
    "Front",
    "Individual",
    "ObjectivePair",
    "Population",
    "ReferenceFront",
    "RunConfig",
    "RunResult",
    "compute_feature_stats",
    "decode",
    "dominates",
    "encode",
    "evaluate",
    "exhaustive_pareto",
    "export",
    "holdout_error",
    "hypervolume",
    "igd",
    "knn_predict",
    "load_csv",
    "nondominated_sort",
    "normalize",
    "run",
    "run_batch",
    "stratified_split",
]

__version__ = "0.1.0"
