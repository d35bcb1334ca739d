"""Self-training by heuristic relabeling of the probability extremes, and corpus tagging."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .classifier import FeatureConfig, Hyperparams, IndicatorModel, featurize_batch, featurize_many, sigmoid, train

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelfTrainConfig:
    fraction_per_end: float = 0.45
    iterations: int = 1
    convergence_delta: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.fraction_per_end <= 0.5:
            raise ValueError("fraction_per_end must lie in [0, 0.5]")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")


@dataclass(frozen=True)
class PseudoLabels:
    positive: tuple[str, ...]
    negative: tuple[str, ...]


def pseudo_label(sent_ids: Sequence[str], probs: Sequence[float], fraction: float) -> PseudoLabels:
    """Take floor(fraction * n) ids from each end of the probability ranking.

    Ties are broken by sent_id (ascending) at both ends.
    """
    n = len(sent_ids)
    k = int(np.floor(fraction * n + 1e-9))
    if k == 0:
        return PseudoLabels((), ())
    probs = np.asarray(probs, dtype=np.float64)
    ids = np.asarray(sent_ids)
    id_rank = np.argsort(np.argsort(ids, kind="stable"), kind="stable")
    top = np.lexsort((id_rank, -probs))[:k]
    bottom = np.lexsort((id_rank, probs))[:k]
    return PseudoLabels(tuple(ids[top].tolist()), tuple(ids[bottom].tolist()))


def self_train(
    train_set: Sequence[tuple[str, str, bool]],
    pool: Sequence[tuple[str, str]],
    config: SelfTrainConfig = SelfTrainConfig(),
    hyperparams: Hyperparams = Hyperparams(),
    feature_config: FeatureConfig | None = None,
    indicator: str = "",
    initial_model: IndicatorModel | None = None,
) -> IndicatorModel:
    """Train on human labels, pseudo-label the pool's extremes, retrain.

    ``train_set`` holds (sent_id, lowercased text, label) human examples;
    ``pool`` holds (sent_id, lowercased text) unlabeled sentences. Pool
    sentences that also carry a human label are dropped from the pool.
    Each round rescores the original pool and recomputes pseudo labels from
    scratch. Round statistics land in ``model.metadata["self_training"]``.
    """
    feature_config = feature_config or FeatureConfig()
    human_ids = {sid for sid, _, _ in train_set}
    human_feats = featurize_many([t for _, t, _ in train_set], feature_config)
    human_examples = [(f, bool(y)) for f, (_, _, y) in zip(human_feats, train_set)]
    model = initial_model or train(human_examples, hyperparams, feature_config, indicator)

    pool = [(sid, text) for sid, text in pool if sid not in human_ids]
    if not pool:
        logger.warning("self-training %s: empty pool, keeping the initial model", indicator or "model")
        return model
    if config.iterations == 0 or int(np.floor(config.fraction_per_end * len(pool) + 1e-9)) == 0:
        return model

    pool_ids = [sid for sid, _ in pool]
    ids, owner = featurize_batch([t for _, t in pool], feature_config)
    pool_feats = _split(ids, owner, len(pool))
    index = {sid: i for i, sid in enumerate(pool_ids)}
    probs = sigmoid(model.scores(ids, owner, len(pool)))
    rounds = []
    for r in range(config.iterations):
        pl = pseudo_label(pool_ids, probs, config.fraction_per_end)
        examples = list(human_examples)
        examples += [(pool_feats[index[sid]], True) for sid in pl.positive]
        examples += [(pool_feats[index[sid]], False) for sid in pl.negative]
        model = train(examples, hyperparams, feature_config, indicator)
        new_probs = sigmoid(model.scores(ids, owner, len(pool)))
        delta = float(np.mean(np.abs(new_probs - probs)))
        rounds.append({"round": r + 1, "pseudo_positive": len(pl.positive), "pseudo_negative": len(pl.negative), "mean_abs_change": delta})
        probs = new_probs
        if config.convergence_delta is not None and delta < config.convergence_delta:
            break
    model.metadata["self_training"] = {
        "fraction_per_end": config.fraction_per_end,
        "pool_size": len(pool),
        "human_examples": len(human_examples),
        "rounds": rounds,
    }
    return model


def _split(ids: np.ndarray, owner: np.ndarray, n: int) -> list[np.ndarray]:
    bounds = np.searchsorted(owner, np.arange(n + 1))
    return [ids[bounds[i] : bounds[i + 1]] for i in range(n)]


# --------------------------------------------------------------------------
# Tagging
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TaggedSentence:
    sent_id: str
    probs: dict[str, float]
    flags: dict[str, bool]
    bins: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"sent_id": self.sent_id, "probs": self.probs, "flags": self.flags}
        if self.bins:
            d["bins"] = self.bins
        return d


def tag_corpus(
    models: Mapping[str, IndicatorModel],
    corpus: Iterable,
    threshold: float | Mapping[str, float] = 0.5,
    batch_size: int = 8192,
    bins: Mapping[str, Mapping[str, str]] | None = None,
) -> Iterator[TaggedSentence]:
    """Score every sentence with every model, in corpus order.

    ``corpus`` yields objects with ``sent_id`` and ``lower``. Sentences are
    featurized once per distinct feature configuration.
    """
    names = sorted(models)
    thresholds = {n: threshold.get(n, 0.5) if isinstance(threshold, Mapping) else threshold for n in names}
    by_config: dict[FeatureConfig, list[str]] = {}
    for n in names:
        by_config.setdefault(models[n].feature_config, []).append(n)

    batch = []
    for sent in corpus:
        batch.append(sent)
        if len(batch) >= batch_size:
            yield from _tag_batch(models, by_config, thresholds, batch, bins)
            batch = []
    if batch:
        yield from _tag_batch(models, by_config, thresholds, batch, bins)


def _tag_batch(models, by_config, thresholds, batch, bins) -> Iterator[TaggedSentence]:
    texts = [s.lower for s in batch]
    probs: dict[str, np.ndarray] = {}
    for config, names in by_config.items():
        ids, owner = featurize_batch(texts, config)
        for n in names:
            probs[n] = sigmoid(models[n].scores(ids, owner, len(texts)))
    order = sorted(probs)
    columns = {n: probs[n].tolist() for n in order}
    for i, sent in enumerate(batch):
        p = {n: columns[n][i] for n in order}
        f = {n: p[n] >= thresholds[n] for n in order}
        b = {n: bins[n][sent.sent_id] for n in order if bins and n in bins and sent.sent_id in bins[n]}
        yield TaggedSentence(sent.sent_id, p, f, b)
