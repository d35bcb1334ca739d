"""Turn a synthetic corpus into comparison inputs, with gold labels standing in for the labeler."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from ..corpus import AnnotatedSentence, HeuristicAnnotator, build_corpus
from ..les import IndicatorRules, load_indicator, parse_rules
from ..les.partition import Bin, assign_bins
from ..sampling import SamplingConfig, redistributive_sample
from .baselines import DEFAULT_POSITIVE_BINS
from .compare import IndicatorData
from .synthetic import PLANTED_RULES, PLANTED_TOKEN, PlantedConfig, SyntheticCorpus, planted_corpus


def shipped_indicator_dir() -> Path:
    return Path(str(resources.files("flagit") / "data" / "indicators"))


def shipped_indicators(names: Sequence[str]) -> dict[str, IndicatorRules]:
    base = shipped_indicator_dir()
    return {n: load_indicator(base / n) for n in names}


@dataclass
class Fixture:
    corpus: list[AnnotatedSentence]
    data: list[IndicatorData]
    partitions: dict[str, dict[str, Bin]]


def build_fixture(
    syn: SyntheticCorpus,
    rules: Mapping[str, IndicatorRules],
    sampling: SamplingConfig = SamplingConfig(),
    pool_size: int | None = 5000,
    annotator=None,
    positive_bins: Mapping[str, frozenset[Bin]] | None = None,
) -> Fixture:
    """Partition, draw the labeling sample and label it from gold.

    The pool is the first ``pool_size`` unsampled sentences in corpus order.
    """
    corpus, _ = build_corpus(syn.documents, annotator or HeuristicAnnotator())
    texts = {s.sent_id: s.lower for s in corpus}
    data, partitions = [], {}
    for name, ind in rules.items():
        bins = assign_bins(ind.rules, corpus)
        partitions[name] = bins
        by_bin: dict[Bin, list[str]] = {}
        for sid, b in bins.items():
            by_bin.setdefault(b, []).append(sid)
        sample = redistributive_sample(by_bin, sampling)
        gold = syn.gold_for(name, corpus)
        labels = {sid: gold[sid] for ids in sample.values() for sid in ids}
        pool = [s.sent_id for s in corpus if s.sent_id not in labels]
        if pool_size is not None:
            pool = pool[:pool_size]
        pb = (positive_bins or {}).get(name, DEFAULT_POSITIVE_BINS)
        data.append(IndicatorData(name, labels, texts, bins, pool, positive_bins=pb))
    return Fixture(corpus, data, partitions)


def planted_fixture(cfg: PlantedConfig = PlantedConfig(), sampling: SamplingConfig = SamplingConfig()) -> Fixture:
    """The single-indicator planted-signal fixture: 140 labels, 5,000 unlabeled."""
    syn = planted_corpus(cfg)
    rules = IndicatorRules(PLANTED_TOKEN, tuple(parse_rules(PLANTED_RULES, {}, PLANTED_TOKEN)), {})
    return build_fixture(syn, {PLANTED_TOKEN: rules}, sampling, pool_size=5000)
