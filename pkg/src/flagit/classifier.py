"""Bag-of-tricks linear classifier over hashed n-gram embeddings.

A sentence is a multiset of hashed word (and optionally character) n-gram
ids. Its representation is the mean of the embedding rows of those ids,
scored by a linear output layer and squashed with a sigmoid. Training is
plain SGD on the logistic loss with a linearly decaying learning rate.

Embedding rows start at zero and the output weights are drawn uniformly
from [-sqrt(dim), sqrt(dim)]. An untrained model therefore scores every
sentence at exactly 0.5, and rows never touched by training stay zero.
Models store only the rows seen in training.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateTrainingSetError

_U64 = np.uint64
_MASK = (1 << 64) - 1
_FNV_PRIME = np.uint64(0x100000001B3)
_SEEDS = {1: 0x9E3779B97F4A7C15, 2: 0xC2B2AE3D27D4EB4F, 3: 0x165667B19E3779F9, 4: 0x27D4EB2F165667C5}
_CHAR_SEED = 0x85EBCA77C2B2AE63

MODEL_MAGIC = b"FLAGITM\x00"
MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class FeatureConfig:
    word_ngrams: int = 2
    char_ngrams: tuple[int, int] | None = None
    buckets: int = 2**21
    hash_seed: int = 0

    def __post_init__(self):
        if self.word_ngrams < 1:
            raise ValueError("word_ngrams must be >= 1")
        if self.buckets < 1 or self.buckets & (self.buckets - 1):
            raise ValueError("buckets must be a power of two")
        if self.char_ngrams is not None:
            lo, hi = self.char_ngrams
            if not 1 <= lo <= hi:
                raise ValueError("char_ngrams must be (min, max) with 1 <= min <= max")
            object.__setattr__(self, "char_ngrams", (int(lo), int(hi)))
        if not 0 <= self.hash_seed < 2**64:
            raise ValueError("hash_seed must fit in 64 unsigned bits")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["char_ngrams"] = list(self.char_ngrams) if self.char_ngrams else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureConfig":
        cn = d.get("char_ngrams")
        return cls(
            word_ngrams=int(d.get("word_ngrams", 2)),
            char_ngrams=tuple(cn) if cn else None,
            buckets=int(d.get("buckets", 2**21)),
            hash_seed=int(d.get("hash_seed", 0)),
        )


# --------------------------------------------------------------------------
# Hashing
# --------------------------------------------------------------------------

_token_hashes: dict[int, dict[str, int]] = {}
_char_hashes: dict[tuple, dict[str, list[int]]] = {}
_CACHE_LIMIT = 2_000_000


def _string_hash(s: str, seed: int) -> int:
    return int.from_bytes(
        hashlib.blake2b(s.encode("utf-8"), digest_size=8, key=seed.to_bytes(8, "little")).digest(), "little"
    )


def _mix(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, elementwise on uint64 arrays."""
    x = x ^ (x >> _U64(30))
    x = x * _U64(0xBF58476D1CE4E5B9)
    x = x ^ (x >> _U64(27))
    x = x * _U64(0x94D049BB133111EB)
    return x ^ (x >> _U64(31))


def _token_hash_array(tokens: list[str], seed: int) -> np.ndarray:
    cache = _token_hashes.setdefault(seed, {})
    if len(cache) > _CACHE_LIMIT:
        cache.clear()
    out = np.empty(len(tokens), dtype=_U64)
    for i, tok in enumerate(tokens):
        h = cache.get(tok)
        if h is None:
            h = cache[tok] = _string_hash(tok, seed)
        out[i] = h
    return out


def _char_ids(token: str, config: FeatureConfig) -> list[int]:
    lo, hi = config.char_ngrams
    key = (config.hash_seed ^ _CHAR_SEED, lo, hi)
    cache = _char_hashes.setdefault(key, {})
    ids = cache.get(token)
    if ids is None:
        padded = f"<{token}>"
        grams = [padded[i : i + n] for n in range(lo, hi + 1) for i in range(len(padded) - n + 1)]
        ids = [_string_hash(g, key[0]) for g in grams]
        if len(cache) > _CACHE_LIMIT:
            cache.clear()
        cache[token] = ids
    return ids


def featurize_batch(texts: Sequence[str], config: FeatureConfig) -> tuple[np.ndarray, np.ndarray]:
    """Hash a batch of (lowercased) sentences.

    Returns ``(ids, owner)``: flat int64 feature ids and, for each id, the
    index of the sentence it belongs to. Within a sentence, ids are ordered
    by n-gram order, then position; character n-grams come last.
    """
    token_lists = [t.split() for t in texts]
    lengths = np.fromiter((len(t) for t in token_lists), dtype=np.int64, count=len(token_lists))
    flat = [tok for toks in token_lists for tok in toks]
    th = _token_hash_array(flat, config.hash_seed)
    owner_tok = np.repeat(np.arange(len(texts), dtype=np.int64), lengths)
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1])) if len(texts) else np.zeros(0, np.int64)
    pos_in_sent = np.arange(len(flat), dtype=np.int64) - np.repeat(starts, lengths)
    seed_mix = _U64(config.hash_seed & _MASK)
    mask = _U64(config.buckets - 1)

    parts_ids = []
    parts_owner = []
    parts_rank = []
    with np.errstate(over="ignore"):
        for n in range(1, config.word_ngrams + 1):
            valid = np.nonzero(pos_in_sent + n <= np.repeat(lengths, lengths))[0]
            if valid.size == 0:
                continue
            h = np.full(valid.size, _U64(_SEEDS.get(n, n * 0x9E3779B97F4A7C15 & _MASK)), dtype=_U64) ^ seed_mix
            for k in range(n):
                h = _mix((h * _FNV_PRIME) ^ th[valid + k])
            parts_ids.append((h & mask).astype(np.int64))
            parts_owner.append(owner_tok[valid])
            parts_rank.append(np.full(valid.size, n, dtype=np.int64))
        if config.char_ngrams is not None and flat:
            cids = [_char_ids(tok, config) for tok in flat]
            counts = np.fromiter((len(c) for c in cids), dtype=np.int64, count=len(cids))
            ch = np.fromiter((x for c in cids for x in c), dtype=_U64, count=int(counts.sum()))
            parts_ids.append((_mix(ch ^ seed_mix) & mask).astype(np.int64))
            parts_owner.append(np.repeat(owner_tok, counts))
            parts_rank.append(np.full(ch.size, config.word_ngrams + 1, dtype=np.int64))
    if not parts_ids:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    ids = np.concatenate(parts_ids)
    owner = np.concatenate(parts_owner)
    order = np.lexsort((np.concatenate(parts_rank), owner))
    return ids[order], owner[order]


def featurize(text: str, config: FeatureConfig | None = None) -> np.ndarray:
    """Feature ids (a multiset, as an int64 array) for one lowercased sentence."""
    ids, _ = featurize_batch([text], config or FeatureConfig())
    return ids


def featurize_many(texts: Sequence[str], config: FeatureConfig) -> list[np.ndarray]:
    ids, owner = featurize_batch(texts, config)
    bounds = np.searchsorted(owner, np.arange(len(texts) + 1))
    return [ids[bounds[i] : bounds[i + 1]] for i in range(len(texts))]


# --------------------------------------------------------------------------
# Model
# --------------------------------------------------------------------------


def sigmoid(z):
    """Logistic function, clipped so results stay strictly inside (0, 1)."""
    p = 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=np.float64)))
    return np.clip(p, np.finfo(np.float64).tiny, 1.0 - 2.0**-53)


@dataclass(frozen=True)
class Hyperparams:
    epochs: int = 10
    lr0: float = 0.1
    dim: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1 or self.epochs < 0 or self.lr0 <= 0:
            raise ValueError(f"invalid hyperparameters {self}")


@dataclass
class IndicatorModel:
    indicator: str
    feature_config: FeatureConfig
    rows: np.ndarray  # sorted unique bucket ids that have (possibly) nonzero embeddings
    embeddings: np.ndarray  # len(rows) x dim
    weights: np.ndarray  # dim
    bias: float = 0.0
    metadata: dict = field(default_factory=dict)
    _row_scores: np.ndarray | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return int(self.weights.shape[0])

    @classmethod
    def initial(cls, indicator: str, feature_config: FeatureConfig, hyperparams: Hyperparams = Hyperparams()) -> "IndicatorModel":
        """Untrained model: zero embeddings and bias, uniform output weights in [-sqrt(dim), sqrt(dim)]."""
        rng = np.random.default_rng(hyperparams.seed)
        # The scale sets how fast feature scores move: an SGD step changes
        # w.e by about lr*|w|^2/n, and |w|^2 ~ dim^2/3 here. Unit-range
        # weights underfit ~100 labels at the default lr.
        weights = rng.uniform(-1.0, 1.0, hyperparams.dim) * np.sqrt(hyperparams.dim)
        return cls(
            indicator,
            feature_config,
            np.zeros(0, np.int64),
            np.zeros((0, hyperparams.dim)),
            weights,
            0.0,
            {"hyperparams": asdict(hyperparams), "loss_curve": [], "n_examples": 0},
        )

    def row_scores(self) -> np.ndarray:
        if self._row_scores is None:
            self._row_scores = self.embeddings @ self.weights
        return self._row_scores

    def scores(self, ids: np.ndarray, owner: np.ndarray, n: int) -> np.ndarray:
        """Linear scores for ``n`` sentences given flat feature ids and owners."""
        counts = np.bincount(owner, minlength=n).astype(np.float64)
        if self.rows.size and ids.size:
            pos = np.searchsorted(self.rows, ids)
            pos_c = np.minimum(pos, self.rows.size - 1)
            found = self.rows[pos_c] == ids
            contrib = np.where(found, self.row_scores()[pos_c], 0.0)
            sums = np.bincount(owner, weights=contrib, minlength=n)
        else:
            sums = np.zeros(n)
        mean = np.divide(sums, counts, out=np.zeros(n), where=counts > 0)
        return mean + self.bias

    def predict_proba_many(self, texts: Sequence[str]) -> np.ndarray:
        ids, owner = featurize_batch(texts, self.feature_config)
        return sigmoid(self.scores(ids, owner, len(texts)))

    def fingerprint(self) -> str:
        return hashlib.sha256(model_bytes(self)).hexdigest()


def predict_proba(model: IndicatorModel, sentence) -> float:
    """P(positive) for one sentence (a lowercased string or anything with ``.lower``)."""
    text = sentence if isinstance(sentence, str) else sentence.lower
    return float(model.predict_proba_many([text])[0])


# --------------------------------------------------------------------------
# Loss, gradients and training
# --------------------------------------------------------------------------


def _forward(E: np.ndarray, w: np.ndarray, b: float, idx: np.ndarray) -> tuple[np.ndarray, float]:
    if idx.size:
        h = E[idx].mean(axis=0)
    else:
        h = np.zeros_like(w)
    return h, float(h @ w + b)


def logistic_loss(z, y):
    """-log P(y | z) for labels in {0, 1}, computed stably."""
    return np.logaddexp(0.0, z) - y * z


def loss_and_grad(
    E: np.ndarray, w: np.ndarray, b: float, idx: np.ndarray, y: float
) -> tuple[float, np.ndarray, np.ndarray, float]:
    """Loss of one example and its gradients w.r.t. (E, w, b).

    ``idx`` holds row indices into ``E`` (repeats allowed). The embedding
    gradient is returned dense, shaped like ``E``.
    """
    h, z = _forward(E, w, b, idx)
    g = float(sigmoid(z)) - y
    grad_E = np.zeros_like(E)
    if idx.size:
        np.add.at(grad_E, idx, g * w / idx.size)
    return float(logistic_loss(z, y)), grad_E, g * h, g


def train(
    examples: Sequence[tuple[np.ndarray, bool]],
    hyperparams: Hyperparams = Hyperparams(),
    feature_config: FeatureConfig | None = None,
    indicator: str = "",
) -> IndicatorModel:
    """Fit a model by SGD on (feature ids, label) pairs."""
    labels = np.array([bool(y) for _, y in examples], dtype=np.float64)
    if labels.size == 0 or labels.min() == labels.max():
        raise DegenerateTrainingSetError("degenerate training set: need at least one example of each class")
    feature_config = feature_config or FeatureConfig()
    model = IndicatorModel.initial(indicator, feature_config, hyperparams)
    all_ids = [np.asarray(f, dtype=np.int64) for f, _ in examples]
    rows = np.unique(np.concatenate(all_ids)) if all_ids else np.zeros(0, np.int64)
    local = [np.searchsorted(rows, f) for f in all_ids]
    owner = np.repeat(np.arange(len(local)), [a.size for a in local])
    flat = np.concatenate(local) if local else np.zeros(0, np.int64)
    counts = np.bincount(owner, minlength=len(local)).astype(np.float64)

    E = np.zeros((rows.size, hyperparams.dim))
    w = model.weights.copy()
    b = 0.0
    rng = np.random.default_rng([hyperparams.seed, 1])
    total = hyperparams.epochs * len(local)
    step = 0
    loss_curve = []
    for _ in range(hyperparams.epochs):
        for i in rng.permutation(len(local)):
            lr = hyperparams.lr0 * (1.0 - step / total)
            step += 1
            idx = local[i]
            h, z = _forward(E, w, b, idx)
            g = float(sigmoid(z)) - labels[i]
            if idx.size:
                np.add.at(E, idx, (-lr * g / idx.size) * w)
            w -= (lr * g) * h
            b -= lr * g
        s = E @ w
        z_all = np.divide(np.bincount(owner, weights=s[flat], minlength=len(local)), counts,
                          out=np.zeros(len(local)), where=counts > 0) + b
        loss_curve.append(float(np.mean(logistic_loss(z_all, labels))))

    model.rows = rows
    model.embeddings = E
    model.weights = w
    model.bias = float(b)
    model.metadata.update(
        loss_curve=loss_curve,
        final_loss=loss_curve[-1] if loss_curve else None,
        n_examples=len(local),
        n_positive=int(labels.sum()),
        lr_schedule="linear-decay",
    )
    return model


def train_texts(
    texts: Sequence[str],
    labels: Sequence[bool],
    hyperparams: Hyperparams = Hyperparams(),
    feature_config: FeatureConfig | None = None,
    indicator: str = "",
) -> IndicatorModel:
    feature_config = feature_config or FeatureConfig()
    feats = featurize_many(texts, feature_config)
    return train(list(zip(feats, labels)), hyperparams, feature_config, indicator)


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------
#
# Layout: MAGIC (8 bytes) | u32 format version | u32 header length |
# UTF-8 JSON header | rows (int64 LE) | embeddings (float64 LE, C order) |
# weights (float64 LE). All integers little-endian.


def model_bytes(model: IndicatorModel) -> bytes:
    header = {
        "format": "flagit-model",
        "indicator": model.indicator,
        "feature_config": model.feature_config.to_dict(),
        "dim": model.dim,
        "n_rows": int(model.rows.size),
        "bias": float(model.bias),
        "metadata": model.metadata,
    }
    hb = json.dumps(header, sort_keys=True).encode("utf-8")
    return b"".join(
        [
            MODEL_MAGIC,
            struct.pack("<II", MODEL_FORMAT_VERSION, len(hb)),
            hb,
            np.ascontiguousarray(model.rows, dtype="<i8").tobytes(),
            np.ascontiguousarray(model.embeddings, dtype="<f8").tobytes(),
            np.ascontiguousarray(model.weights, dtype="<f8").tobytes(),
        ]
    )


def model_from_bytes(data: bytes) -> IndicatorModel:
    if data[:8] != MODEL_MAGIC:
        raise ValueError("not a flagit model file")
    version, hlen = struct.unpack("<II", data[8:16])
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version}")
    header = json.loads(data[16 : 16 + hlen].decode("utf-8"))
    off = 16 + hlen
    n, dim = header["n_rows"], header["dim"]
    rows = np.frombuffer(data, dtype="<i8", count=n, offset=off).astype(np.int64)
    off += 8 * n
    emb = np.frombuffer(data, dtype="<f8", count=n * dim, offset=off).astype(np.float64).reshape(n, dim)
    off += 8 * n * dim
    weights = np.frombuffer(data, dtype="<f8", count=dim, offset=off).astype(np.float64)
    return IndicatorModel(
        header["indicator"],
        FeatureConfig.from_dict(header["feature_config"]),
        rows,
        emb,
        weights,
        header["bias"],
        header["metadata"],
    )


def save_model(model: IndicatorModel, path: str | Path) -> None:
    Path(path).write_bytes(model_bytes(model))


def load_model(path: str | Path) -> IndicatorModel:
    return model_from_bytes(Path(path).read_bytes())


def all_finite(model: IndicatorModel) -> bool:
    return bool(np.isfinite(model.embeddings).all() and np.isfinite(model.weights).all() and np.isfinite(model.bias))


def predict_labels(model: IndicatorModel, texts: Iterable[str], threshold: float = 0.5) -> np.ndarray:
    return model.predict_proba_many(list(texts)) >= threshold
