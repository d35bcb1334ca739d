"""Budgeted redistributive sampling over the partition, label persistence and splits."""

from __future__ import annotations

import enum
import json
import logging
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Collection, Iterable, Mapping, Sequence

import numpy as np

from .errors import InsufficientLabelsError, UnknownSentenceError
from .les.partition import BIN_ORDER, Bin

logger = logging.getLogger(__name__)

NUM_BINS = len(BIN_ORDER)


@dataclass(frozen=True)
class SamplingConfig:
    budget: int = 140
    per_bin_quota: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.per_bin_quota is None:
            object.__setattr__(self, "per_bin_quota", self.budget // NUM_BINS)
        elif self.per_bin_quota != self.budget // NUM_BINS:
            raise ValueError(
                f"per_bin_quota {self.per_bin_quota} inconsistent with budget {self.budget} "
                f"(first-round quota is budget // {NUM_BINS} = {self.budget // NUM_BINS})"
            )


def allocate(sizes: Sequence[int], budget: int) -> list[int]:
    """Per-bin sample counts for ``sizes`` (canonical bin order).

    Each round splits the remaining budget evenly over the open bins, the
    remainder going one apiece to the earliest open bins. Bins smaller than
    their quota give everything and are frozen; the loop repeats until no
    open bin is short.
    """
    alloc = [0] * len(sizes)
    open_bins = list(range(len(sizes)))
    remaining = budget
    while open_bins:
        q, r = divmod(remaining, len(open_bins))
        quota = {b: q + (1 if k < r else 0) for k, b in enumerate(open_bins)}
        short = [b for b in open_bins if sizes[b] < quota[b]]
        if not short:
            for b in open_bins:
                alloc[b] = quota[b]
            break
        for b in short:
            alloc[b] = sizes[b]
            remaining -= sizes[b]
        open_bins = [b for b in open_bins if b not in short]
    return alloc


def _bin_rng(seed: int, bin_index: int) -> np.random.Generator:
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, bin_index])


def redistributive_sample(
    partition: Mapping[Bin, Sequence[str]], config: SamplingConfig
) -> dict[Bin, list[str]]:
    """Draw the labeling sample; returns sorted sent_ids per bin (all seven keys)."""
    pools = [sorted(partition.get(b, ())) for b in BIN_ORDER]
    counts = allocate([len(p) for p in pools], config.budget)
    out = {}
    for i, (b, pool, k) in enumerate(zip(BIN_ORDER, pools, counts)):
        if k >= len(pool):
            out[b] = list(pool)
        else:
            idx = _bin_rng(config.seed, i).choice(len(pool), size=k, replace=False)
            out[b] = sorted(pool[j] for j in idx)
    return out


def sample_manifest(indicator: str, seed: int, sample: Mapping[Bin, Sequence[str]]) -> dict:
    return {"indicator": indicator, "seed": seed, "bins": {b.value: list(sample.get(b, ())) for b in BIN_ORDER}}


def manifest_ids(manifest: Mapping) -> list[str]:
    return [sid for b in BIN_ORDER for sid in manifest["bins"].get(b.value, ())]


# --------------------------------------------------------------------------
# Label store
# --------------------------------------------------------------------------


class LabelSource(str, enum.Enum):
    HUMAN = "human"
    PSEUDO_POSITIVE = "pseudo_positive"
    PSEUDO_NEGATIVE = "pseudo_negative"


@dataclass(frozen=True)
class LabeledExample:
    sent_id: str
    indicator: str
    label: bool
    source: LabelSource = LabelSource.HUMAN
    ts: float = 0.0

    @property
    def is_human(self) -> bool:
        return self.source is LabelSource.HUMAN

    def to_dict(self) -> dict:
        return {
            "sent_id": self.sent_id,
            "indicator": self.indicator,
            "label": self.label,
            "source": self.source.value,
            "ts": self.ts,
        }


class LabelStore:
    """Append-only JSONL journal with a materialized latest-label view.

    Human labels always win over pseudo labels; a later human label replaces
    an earlier one (both stay in the journal). Writes are serialized.
    """

    def __init__(
        self,
        path: str | Path | None = None,
        known_ids: Collection[str] | None = None,
        clock: Callable[[], float] = time.time,
    ):
        self.path = Path(path) if path is not None else None
        self.known_ids = known_ids
        self.clock = clock
        self._lock = threading.Lock()
        self._latest: dict[tuple[str, str], LabeledExample] = {}
        self.journal: list[LabeledExample] = []
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    d = json.loads(line)
                    ex = LabeledExample(d["sent_id"], d["indicator"], bool(d["label"]), LabelSource(d["source"]), d.get("ts", 0.0))
                    self.journal.append(ex)
                    self._apply(ex)

    def _apply(self, ex: LabeledExample) -> bool:
        key = (ex.sent_id, ex.indicator)
        prior = self._latest.get(key)
        if prior is not None and prior.is_human and not ex.is_human:
            return False
        self._latest[key] = ex
        return True

    def record_label(
        self, sent_id: str, indicator: str, label: bool, source: LabelSource | str = LabelSource.HUMAN
    ) -> LabeledExample | None:
        """Store a label; returns the stored example, or None if it was ignored."""
        if self.known_ids is not None and sent_id not in self.known_ids:
            raise UnknownSentenceError(f"unknown sent_id {sent_id!r}")
        source = LabelSource(source)
        with self._lock:
            ex = LabeledExample(sent_id, indicator, bool(label), source, self.clock())
            prior = self._latest.get((sent_id, indicator))
            if not self._apply(ex):
                logger.warning("ignoring %s label for %s/%s: a human label exists", source.value, sent_id, indicator)
                return None
            if prior is not None and prior.is_human and ex.is_human:
                logger.info("relabeled %s/%s: %s -> %s", sent_id, indicator, prior.label, ex.label)
            self.journal.append(ex)
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(ex.to_dict(), sort_keys=True) + "\n")
        return ex

    def get(self, sent_id: str, indicator: str) -> LabeledExample | None:
        return self._latest.get((sent_id, indicator))

    def labels(self, indicator: str, human_only: bool = True) -> dict[str, bool]:
        return {
            sid: ex.label
            for (sid, ind), ex in self._latest.items()
            if ind == indicator and (ex.is_human or not human_only)
        }

    def examples(self, indicator: str) -> list[LabeledExample]:
        return sorted((ex for (_, ind), ex in self._latest.items() if ind == indicator), key=lambda e: e.sent_id)

    def missing(self, indicator: str, sent_ids: Iterable[str]) -> list[str]:
        have = self.labels(indicator)
        return [sid for sid in sent_ids if sid not in have]


# --------------------------------------------------------------------------
# Train/test split
# --------------------------------------------------------------------------


def split_train_test(
    labeled: Mapping[str, bool] | Iterable[LabeledExample], ratio: float = 0.7, seed: int = 0
) -> tuple[dict[str, bool], dict[str, bool]]:
    """Stratified, seeded split of human labels into (train, test) dicts."""
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must lie strictly between 0 and 1, got {ratio}")
    if not isinstance(labeled, Mapping):
        labeled = {ex.sent_id: ex.label for ex in labeled if ex.is_human}
    train: dict[str, bool] = {}
    test: dict[str, bool] = {}
    rng = np.random.default_rng(seed)
    for cls in (False, True):
        ids = sorted(sid for sid, y in labeled.items() if y is cls)
        if len(ids) < 2:
            raise InsufficientLabelsError(
                f"insufficient labels: class {'positive' if cls else 'negative'} has {len(ids)} example(s), need >= 2"
            )
        order = rng.permutation(len(ids))
        n_train = min(max(int(round(ratio * len(ids))), 1), len(ids) - 1)
        for rank, j in enumerate(order):
            (train if rank < n_train else test)[ids[j]] = cls
    return dict(sorted(train.items())), dict(sorted(test.items()))
