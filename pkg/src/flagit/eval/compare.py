"""Paired multi-seed comparison of FlagIt against the baselines."""

from __future__ import annotations

import csv
import hashlib
import json
import statistics
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..classifier import FeatureConfig, Hyperparams, featurize_many, train
from ..les.partition import Bin
from ..sampling import split_train_test
from ..semisup import SelfTrainConfig, self_train
from .baselines import DEFAULT_POSITIVE_BINS, bow_baseline, les_predict
from .metrics import MetricsReport, evaluate

SYSTEMS = ("flagit", "bow", "les")
NOSEMISUP = "flagit_nosemisup"
REPORT_COLUMNS = ("system", "indicator", "seed", "precision", "recall", "f1", "split_fingerprint")


@dataclass(frozen=True)
class ProtocolConfig:
    ratio: float = 0.7
    hyperparams: Hyperparams = Hyperparams()
    feature_config: FeatureConfig = FeatureConfig()
    self_train: SelfTrainConfig = SelfTrainConfig()


@dataclass
class IndicatorData:
    """Everything one indicator contributes to a comparison run.

    ``labels`` are the human labels (the stratified sample), ``texts`` maps
    sent_id to lowercased text for every id used, ``bins`` maps sent_id to its
    partition bin, and ``pool`` lists the unlabeled ids used for self-training.
    """

    indicator: str
    labels: Mapping[str, bool]
    texts: Mapping[str, str]
    bins: Mapping[str, Bin]
    pool: Sequence[str]
    threshold: float = 0.5
    positive_bins: frozenset[Bin] = DEFAULT_POSITIVE_BINS


@dataclass(frozen=True)
class SummaryRow:
    system: str
    indicator: str
    n_seeds: int
    f1_mean: float
    f1_sd: float
    precision_mean: float
    recall_mean: float


@dataclass
class Comparison:
    reports: list[MetricsReport]
    summary: list[SummaryRow] = field(default_factory=list)

    def semisup_delta(self) -> dict[str, float]:
        return semisup_delta(self.reports)

    def to_dict(self) -> dict:
        return {
            "reports": [r.to_dict() for r in self.reports],
            "summary": [asdict(s) for s in self.summary],
            "semisup_delta": self.semisup_delta(),
        }


def split_fingerprint(train: Mapping[str, bool], test: Mapping[str, bool]) -> str:
    payload = json.dumps({"train": sorted(train.items()), "test": sorted(test.items())}, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def run_indicator(data: IndicatorData, seeds: Iterable[int], config: ProtocolConfig = ProtocolConfig()) -> list[MetricsReport]:
    """Per-seed reports for every system, all scored on the same split."""
    fc = config.feature_config
    pool = [(sid, data.texts[sid]) for sid in data.pool if sid not in data.labels]
    reports = []
    for seed in seeds:
        train_lab, test_lab = split_train_test(data.labels, config.ratio, seed)
        tag = {"indicator": data.indicator, "seed": seed, "split_fingerprint": split_fingerprint(train_lab, test_lab)}
        train_set = [(sid, data.texts[sid], y) for sid, y in train_lab.items()]
        test_ids = list(test_lab)
        test_texts = [data.texts[sid] for sid in test_ids]
        hp = replace(config.hyperparams, seed=seed)

        feats = featurize_many([t for _, t, _ in train_set], fc)
        initial = train([(f, y) for f, (_, _, y) in zip(feats, train_set)], hp, fc, data.indicator)
        final = self_train(train_set, pool, config.self_train, hp, fc, data.indicator, initial_model=initial)
        for system, model in ((NOSEMISUP, initial), ("flagit", final)):
            probs = model.predict_proba_many(test_texts)
            preds = {sid: bool(p >= data.threshold) for sid, p in zip(test_ids, probs)}
            reports.append(evaluate(preds, test_lab, system=system, **tag))

        reports.append(bow_baseline(train_set, [(sid, data.texts[sid], test_lab[sid]) for sid in test_ids], system="bow", **tag))
        les = {sid: les_predict(data.bins[sid], data.positive_bins) for sid in test_ids}
        reports.append(evaluate(les, test_lab, system="les", **tag))
    return reports


def summarize(reports: Sequence[MetricsReport], systems: Sequence[str] = SYSTEMS) -> list[SummaryRow]:
    """Mean and sample sd of F1 per (indicator, system), indicators in first-seen order."""
    indicators = list(dict.fromkeys(r.indicator for r in reports))
    rows = []
    for ind in indicators:
        for system in systems:
            rs = [r for r in reports if r.indicator == ind and r.system == system]
            if not rs:
                continue
            f1 = [r.f1 for r in rs]
            rows.append(
                SummaryRow(
                    system,
                    ind,
                    len(rs),
                    statistics.fmean(f1),
                    statistics.stdev(f1) if len(f1) > 1 else 0.0,
                    statistics.fmean(r.precision for r in rs),
                    statistics.fmean(r.recall for r in rs),
                )
            )
    return rows


def semisup_delta(reports: Sequence[MetricsReport]) -> dict[str, float]:
    """Mean paired F1 gain of self-training, per indicator."""
    base = {(r.indicator, r.seed): r.f1 for r in reports if r.system == NOSEMISUP}
    deltas: dict[str, list[float]] = {}
    for r in reports:
        if r.system == "flagit" and (r.indicator, r.seed) in base:
            deltas.setdefault(r.indicator, []).append(r.f1 - base[(r.indicator, r.seed)])
    return {ind: statistics.fmean(d) for ind, d in deltas.items()}


def compare_systems(
    indicators: Sequence[IndicatorData],
    seeds: Sequence[int],
    config: ProtocolConfig = ProtocolConfig(),
    systems: Sequence[str] = SYSTEMS,
) -> Comparison:
    reports = [r for data in indicators for r in run_indicator(data, seeds, config)]
    return Comparison(reports, summarize(reports, systems))


def write_reports(comparison: Comparison, out_dir: str | Path, stem: str = "comparison") -> dict[str, Path]:
    """Per-seed CSV, summary CSV and a combined JSON document."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"csv": out / f"{stem}.csv", "summary_csv": out / f"{stem}_summary.csv", "json": out / f"{stem}.json"}
    with open(paths["csv"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_COLUMNS)
        for r in comparison.reports:
            w.writerow([r.system, r.indicator, r.seed, _fmt(r.precision), _fmt(r.recall), _fmt(r.f1), r.split_fingerprint])
    with open(paths["summary_csv"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["system", "indicator", "n_seeds", "f1_mean", "f1_sd", "precision_mean", "recall_mean"])
        for s in comparison.summary:
            w.writerow([s.system, s.indicator, s.n_seeds, _fmt(s.f1_mean), _fmt(s.f1_sd), _fmt(s.precision_mean), _fmt(s.recall_mean)])
    paths["json"].write_text(json.dumps(comparison.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return paths


def _fmt(x: float) -> str:
    return repr(float(x))


def format_table(summary: Sequence[SummaryRow]) -> str:
    lines = [f"{'indicator':<12} {'system':<18} {'F1 mean':>8} {'sd':>7} {'P':>6} {'R':>6}"]
    for s in summary:
        lines.append(
            f"{s.indicator:<12} {s.system:<18} {s.f1_mean:>8.3f} {s.f1_sd:>7.3f} {s.precision_mean:>6.3f} {s.recall_mean:>6.3f}"
        )
    return "\n".join(lines)
