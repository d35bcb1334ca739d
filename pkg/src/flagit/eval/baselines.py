"""Comparison systems: the non-adaptive rule baseline and a bag-of-words learner."""

from __future__ import annotations

from typing import Collection, Iterable, Mapping, Sequence

import numpy as np
from sklearn.feature_extraction.text import CountVectorizer
from sklearn.linear_model import LogisticRegression

from ..corpus import AnnotatedSentence
from ..errors import DegenerateTrainingSetError
from ..les.partition import BIN_ORDER, Bin, sentence_bin
from ..les.rules import Rule
from .metrics import MetricsReport, evaluate

DEFAULT_POSITIVE_BINS: frozenset[Bin] = frozenset({Bin.P_OR_SP})


def parse_bins(names: Iterable[str | Bin] | None) -> frozenset[Bin]:
    if names is None:
        return DEFAULT_POSITIVE_BINS
    return frozenset(Bin(n) for n in names)


def les_predict(bin_: Bin | str, positive_bins: Collection[Bin] = DEFAULT_POSITIVE_BINS) -> bool:
    return Bin(bin_) in positive_bins


def les_baseline(
    rules: Sequence[Rule], sentence: AnnotatedSentence, positive_bins: Collection[Bin] = DEFAULT_POSITIVE_BINS
) -> bool:
    """Positive iff the sentence's bin is one of ``positive_bins``."""
    return les_predict(sentence_bin(rules, sentence), positive_bins)


def tune_positive_bins(bins: Mapping[str, Bin], labels: Mapping[str, bool]) -> frozenset[Bin]:
    """Bins whose labeled members are mostly positive on a dev set.

    Bins without any labeled member fall back to the shipped default.
    """
    chosen = set()
    for b in BIN_ORDER:
        ys = [labels[sid] for sid, bb in bins.items() if bb is b and sid in labels]
        if ys:
            if 2 * sum(ys) > len(ys):
                chosen.add(b)
        elif b in DEFAULT_POSITIVE_BINS:
            chosen.add(b)
    return frozenset(chosen)


def bow_model(texts: Sequence[str], labels: Sequence[bool], seed: int = 0):
    """Unigram counts into an L2-regularized logistic regression."""
    vec = CountVectorizer(token_pattern=r"(?u)\b\w+\b", lowercase=True)
    X = vec.fit_transform(texts)
    clf = LogisticRegression(max_iter=1000, random_state=seed)
    clf.fit(X, np.asarray(labels, dtype=bool))
    return vec, clf


def bow_baseline(
    train: Sequence[tuple[str, str, bool]],
    test: Sequence[tuple[str, str, bool]],
    seed: int = 0,
    **labels,
) -> MetricsReport:
    """Fit on ``train`` (sent_id, text, label) triples and score ``test``."""
    ys = [bool(y) for _, _, y in train]
    if len(set(ys)) < 2:
        raise DegenerateTrainingSetError("degenerate training set: need at least one example of each class")
    vec, clf = bow_model([t for _, t, _ in train], ys, seed)
    pred = clf.predict(vec.transform([t for _, t, _ in test])) if test else []
    predictions = {sid: bool(p) for (sid, _, _), p in zip(test, pred)}
    return evaluate(predictions, {sid: bool(y) for sid, _, y in test}, seed=seed, **labels)
