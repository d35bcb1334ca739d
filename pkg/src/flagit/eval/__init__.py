"""Metrics, baselines, the comparison protocol and synthetic corpora."""

from .baselines import DEFAULT_POSITIVE_BINS, bow_baseline, les_baseline, les_predict, tune_positive_bins
from .compare import (
    NOSEMISUP,
    SYSTEMS,
    Comparison,
    IndicatorData,
    ProtocolConfig,
    compare_systems,
    run_indicator,
    semisup_delta,
    split_fingerprint,
    summarize,
    write_reports,
)
from .metrics import MetricsReport, evaluate, from_counts

__all__ = [
    "Comparison",
    "DEFAULT_POSITIVE_BINS",
    "IndicatorData",
    "MetricsReport",
    "NOSEMISUP",
    "ProtocolConfig",
    "SYSTEMS",
    "bow_baseline",
    "compare_systems",
    "evaluate",
    "from_counts",
    "les_baseline",
    "les_predict",
    "run_indicator",
    "semisup_delta",
    "split_fingerprint",
    "summarize",
    "tune_positive_bins",
    "write_reports",
]
