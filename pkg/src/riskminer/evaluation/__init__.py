"""Data splitting, cross-validation, hyperparameter search and evaluation metrics."""

from .metrics import (
    ConfusionMatrix,
    MetricsReport,
    RocCurve,
    confusion,
    metrics,
    regression_metrics,
    roc,
    roc_one_vs_rest,
)
from .search import (
    SearchResult,
    choice,
    cross_val_scores,
    draw_configs,
    grid_search,
    log_uniform,
    random_search,
    uniform,
    uniform_int,
)
from .splits import DEFAULT_RATIOS, DataSplit, fold_pairs, kfold, largest_remainder, split

__all__ = [
    "DEFAULT_RATIOS", "ConfusionMatrix", "DataSplit", "MetricsReport", "RocCurve", "SearchResult",
    "choice", "confusion", "cross_val_scores", "draw_configs", "fold_pairs", "grid_search",
    "kfold", "largest_remainder", "log_uniform", "metrics", "random_search", "regression_metrics",
    "roc", "roc_one_vs_rest", "split", "uniform", "uniform_int",
]
