from __future__ import annotations

from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagit import classifier as C
from flagit.eval.synthetic import PlantedConfig, planted_sentences
from flagit.semisup import SelfTrainConfig, pseudo_label, self_train, tag_corpus


@pytest.fixture(scope="module")
def planted():
    data = planted_sentences(PlantedConfig(n_sentences=1200, positive_rate=0.3, seed=3))
    ids = [f"s{i:04d}" for i in range(len(data))]
    train = [(ids[i], data[i][0], data[i][1]) for i in range(100)]
    pool = [(ids[i], data[i][0]) for i in range(100, 1100)]
    return train, pool


def test_pool_of_1000_gets_450_each_way(planted):
    train, pool = planted
    model = self_train(train, pool, SelfTrainConfig(), C.Hyperparams(seed=1))
    (rnd,) = model.metadata["self_training"]["rounds"]
    assert (rnd["pseudo_positive"], rnd["pseudo_negative"]) == (450, 450)
    assert model.metadata["n_examples"] == 100 + 900


def test_zero_iterations_returns_initial_model(planted):
    train, pool = planted
    hp = C.Hyperparams(seed=2)
    feats = C.featurize_many([t for _, t, _ in train], C.FeatureConfig())
    initial = C.train([(f, y) for f, (_, _, y) in zip(feats, train)], hp)
    same = self_train(train, pool, SelfTrainConfig(iterations=0), hp)
    assert C.model_bytes(same) == C.model_bytes(initial)
    assert self_train(train, pool, SelfTrainConfig(iterations=0), hp, initial_model=initial) is initial


def test_human_labeled_ids_leave_the_pool(planted):
    train, pool = planted
    overlap = pool + [(sid, text) for sid, text, _ in train]
    a = self_train(train, pool, SelfTrainConfig(), C.Hyperparams(seed=1))
    b = self_train(train, overlap, SelfTrainConfig(), C.Hyperparams(seed=1))
    assert C.model_bytes(a) == C.model_bytes(b)


def test_empty_pool_keeps_initial(planted):
    train, _ = planted
    m = self_train(train, [], SelfTrainConfig(), C.Hyperparams(seed=1))
    assert "self_training" not in m.metadata


def test_convergence_stops_early(planted):
    train, pool = planted
    m = self_train(train, pool, SelfTrainConfig(iterations=5, convergence_delta=1.0), C.Hyperparams(seed=1))
    assert len(m.metadata["self_training"]["rounds"]) == 1


def test_pseudo_label_ties_break_by_id():
    ids = ["d", "b", "c", "a"]
    pl = pseudo_label(ids, [0.5, 0.5, 0.5, 0.5], 0.5)
    assert pl.positive == ("a", "b") and pl.negative == ("a", "b")
    pl = pseudo_label(ids, [0.9, 0.1, 0.9, 0.1], 0.25)
    assert pl.positive == ("c",) and pl.negative == ("a",)


@given(st.lists(st.floats(0, 1), min_size=0, max_size=50), st.floats(0, 0.5))
def test_pseudo_label_ends_are_disjoint_extremes(probs, fraction):
    ids = [f"{i:03d}" for i in range(len(probs))]
    pl = pseudo_label(ids, probs, fraction)
    k = int(np.floor(fraction * len(ids) + 1e-9))
    assert len(pl.positive) == len(pl.negative) == k
    p = dict(zip(ids, probs))
    if pl.positive and fraction < 0.5:
        assert not set(pl.positive) & set(pl.negative) or min(probs) == max(probs)
    rest_hi = [p[i] for i in ids if i not in pl.positive]
    if pl.positive and rest_hi:
        assert min(p[i] for i in pl.positive) >= max(rest_hi)


@pytest.mark.parametrize("fraction", [-0.1, 0.6])
def test_config_validation(fraction):
    with pytest.raises(ValueError):
        SelfTrainConfig(fraction_per_end=fraction)


# tagging ------------------------------------------------------------------


def _sentences(texts):
    return [SimpleNamespace(sent_id=f"s{i}", lower=t) for i, t in enumerate(texts)]


def test_tag_threshold_rule():
    m = C.IndicatorModel.initial("movement", C.FeatureConfig())
    m.bias = float(np.log(0.93 / 0.07))
    (tagged,) = tag_corpus({"movement": m}, _sentences(["in town now"]), threshold=0.5)
    assert tagged.probs["movement"] == pytest.approx(0.93)
    assert tagged.flags == {"movement": True}
    (tagged,) = tag_corpus({"movement": m}, _sentences(["x"]), threshold={"movement": 0.95})
    assert tagged.flags == {"movement": False}


def test_tag_with_no_models():
    out = list(tag_corpus({}, _sentences(["a", "b"])))
    assert [t.probs for t in out] == [{}, {}]
    assert [t.flags for t in out] == [{}, {}]


def test_tag_batching_is_invisible(planted):
    train, pool = planted
    model = self_train(train, pool, SelfTrainConfig(iterations=0), C.Hyperparams(seed=1))
    sents = _sentences([t for _, t in pool[:300]])
    big = [t.to_dict() for t in tag_corpus({"z": model}, sents, batch_size=8192)]
    small = [t.to_dict() for t in tag_corpus({"z": model}, sents, batch_size=7)]
    assert big == small
    direct = model.predict_proba_many([s.lower for s in sents])
    assert [d["probs"]["z"] for d in big] == direct.tolist()


def test_tag_attaches_bins():
    m = C.IndicatorModel.initial("a", C.FeatureConfig())
    (t,) = tag_corpus({"a": m}, _sentences(["x"]), bins={"a": {"s0": "NULL"}})
    assert t.to_dict()["bins"] == {"a": "NULL"}
