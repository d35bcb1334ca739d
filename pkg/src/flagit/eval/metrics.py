"""Binary precision / recall / F1 from confusion counts."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Mapping

from ..errors import KeyMismatchError


@dataclass(frozen=True)
class MetricsReport:
    indicator: str
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    tn: int
    fn: int
    system: str = ""
    seed: int | None = None
    split_fingerprint: str = ""

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self) -> dict:
        return asdict(self)


def from_counts(tp: int, fp: int, tn: int, fn: int, **labels) -> MetricsReport:
    """P, R and F1 with 0 for every undefined ratio."""
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    labels.setdefault("indicator", "")
    return MetricsReport(precision=precision, recall=recall, f1=f1, tp=tp, fp=fp, tn=tn, fn=fn, **labels)


def evaluate(predictions: Mapping[str, bool], gold: Mapping[str, bool], **labels) -> MetricsReport:
    """Score ``predictions`` against ``gold``; both must have the same keys."""
    if predictions.keys() != gold.keys():
        diff = sorted(set(predictions) ^ set(gold))
        preview = ", ".join(diff[:10]) + (" ..." if len(diff) > 10 else "")
        raise KeyMismatchError(f"prediction and gold keys differ in {len(diff)} id(s): {preview}")
    tp = fp = tn = fn = 0
    for sid, y in gold.items():
        p = bool(predictions[sid])
        if p and y:
            tp += 1
        elif p:
            fp += 1
        elif y:
            fn += 1
        else:
            tn += 1
    return from_counts(tp, fp, tn, fn, **labels)
