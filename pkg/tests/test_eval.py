from __future__ import annotations

import csv
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagit.errors import DegenerateTrainingSetError, KeyMismatchError
from flagit.eval import (
    NOSEMISUP,
    SYSTEMS,
    bow_baseline,
    compare_systems,
    evaluate,
    from_counts,
    les_baseline,
    les_predict,
    summarize,
    tune_positive_bins,
    write_reports,
)
from flagit.eval.compare import format_table
from flagit.eval.fixtures import build_fixture, shipped_indicators
from flagit.eval.plotting import plot_f1, plot_loss_curves, plot_partition
from flagit.eval.synthetic import INDICATORS, PlantedConfig, generate, planted_sentences, preset
from flagit.corpus import HeuristicAnnotator, annotate
from flagit.les import Bin, parse_rules

from oracles import f1_from_lists


# metrics ------------------------------------------------------------------


def test_metric_examples():
    r = from_counts(tp=8, fp=2, tn=8, fn=2)
    assert (r.precision, r.recall, r.f1) == pytest.approx((0.8, 0.8, 0.8))
    gold = {"a": True, "b": False, "c": True}
    assert evaluate(dict(gold), gold).f1 == 1.0
    r = evaluate({"a": False, "b": False, "c": False}, gold)
    assert (r.precision, r.f1) == (0.0, 0.0)


def test_key_mismatch_names_ids():
    with pytest.raises(KeyMismatchError, match="x"):
        evaluate({"a": True, "x": True}, {"a": True})


@given(st.lists(st.tuples(st.booleans(), st.booleans()), max_size=60))
def test_f1_matches_oracle(pairs):
    preds = {f"{i}": p for i, (p, _) in enumerate(pairs)}
    gold = {f"{i}": g for i, (_, g) in enumerate(pairs)}
    r = evaluate(preds, gold)
    assert r.f1 == pytest.approx(f1_from_lists([p for p, _ in pairs], [g for _, g in pairs]))
    assert r.n == len(pairs)
    assert 0.0 <= r.f1 <= 1.0


# LES baseline -------------------------------------------------------------


def test_les_bin_mapping():
    assert les_predict(Bin.P_OR_SP) is True
    assert les_predict(Bin.NULL) is False
    assert les_predict(Bin.SP_AND_SN) is False
    assert les_predict("SP_AND_SN", {Bin.P_OR_SP, Bin.SP_AND_SN}) is True


def test_les_baseline_on_sentences():
    rules = parse_rules('SP: "incall"\nSN: "no"', {}, "incall")
    ann = HeuristicAnnotator()
    assert les_baseline(rules, annotate("incall tonight", ann)) is True
    assert les_baseline(rules, annotate("no incall", ann)) is False
    assert les_baseline(rules, annotate("hello", ann)) is False


def test_tune_positive_bins():
    bins = {"a": Bin.SP_AND_SN, "b": Bin.SP_AND_SN, "c": Bin.P_AND_N, "d": Bin.N_OR_SN}
    labels = {"a": True, "b": True, "c": False, "d": False}
    assert tune_positive_bins(bins, labels) == {Bin.SP_AND_SN, Bin.P_OR_SP}


# bag of words -------------------------------------------------------------


def _triples(data, offset=0):
    return [(f"s{offset + i}", t, y) for i, (t, y) in enumerate(data)]


def test_bow_on_planted_signal():
    data = planted_sentences(PlantedConfig(n_sentences=400, positive_rate=0.5, strong_rate=0, latent_rate=0, cross_rate=0))
    r = bow_baseline(_triples(data[:200]), _triples(data[200:], 200))
    assert r.f1 >= 0.9


def test_bow_shuffled_labels_is_chance():
    data = planted_sentences(PlantedConfig(n_sentences=400, positive_rate=0.5, strong_rate=0, latent_rate=0, cross_rate=0))
    f1s = []
    for seed in range(10):
        rng = np.random.default_rng(seed)
        shuffled = [(t, bool(y)) for (t, _), y in zip(data, rng.permutation([y for _, y in data]))]
        f1s.append(bow_baseline(_triples(shuffled[:200]), _triples(shuffled[200:], 200), seed=seed).f1)
    assert abs(np.mean(f1s) - 0.5) <= 0.1


def test_bow_disjoint_vocab_is_near_chance():
    train = [("s0", "alpha beta", True), ("s1", "gamma delta", False), ("s2", "alpha", True), ("s3", "delta", False)]
    test = [(f"t{i}", f"word{i} other{i}", i % 2 == 0) for i in range(40)]
    r = bow_baseline(train, test)
    assert r.n == 40
    assert 0.0 <= r.f1 <= 1.0
    # every test row has the same all-zero feature vector, so one class is predicted throughout
    assert r.tp + r.fp in (0, 40)


def test_bow_degenerate():
    with pytest.raises(DegenerateTrainingSetError):
        bow_baseline([("a", "x", True)], [("b", "y", False)])


# comparison protocol ------------------------------------------------------


@pytest.fixture(scope="module")
def small_fixture():
    syn = generate(preset("strong", n_sentences=1500, seed=5))
    return build_fixture(syn, shipped_indicators(INDICATORS), pool_size=400)


@pytest.fixture(scope="module")
def small_comparison(small_fixture):
    return compare_systems(small_fixture.data, list(range(10)))


def test_table_shape(small_comparison):
    summary = small_comparison.summary
    assert len(summary) == 15
    assert {(s.indicator, s.system) for s in summary} == {(i, s) for i in INDICATORS for s in SYSTEMS}
    assert all(s.n_seeds == 10 for s in summary)
    assert len(small_comparison.reports) == 5 * 10 * 4
    assert set(small_comparison.semisup_delta()) == set(INDICATORS)


def test_systems_share_splits(small_comparison):
    by_key = {}
    for r in small_comparison.reports:
        by_key.setdefault((r.indicator, r.seed), set()).add(r.split_fingerprint)
    assert all(len(v) == 1 for v in by_key.values())
    assert {r.system for r in small_comparison.reports} == set(SYSTEMS) | {NOSEMISUP}


def test_comparison_is_deterministic(small_fixture, small_comparison):
    again = compare_systems(small_fixture.data[:2], list(range(3)))
    first = [r for r in small_comparison.reports if r.indicator in {d.indicator for d in small_fixture.data[:2]} and r.seed < 3]
    assert [r.to_dict() for r in again.reports] == [r.to_dict() for r in first]


def test_summary_statistics(small_comparison):
    rows = summarize(small_comparison.reports)
    row = next(s for s in rows if s.indicator == "incall" and s.system == "bow")
    f1 = [r.f1 for r in small_comparison.reports if r.indicator == "incall" and r.system == "bow"]
    assert row.f1_mean == pytest.approx(np.mean(f1))
    assert row.f1_sd == pytest.approx(np.std(f1, ddof=1))


def test_write_reports_and_plots(tmp_path, small_comparison, small_fixture):
    paths = write_reports(small_comparison, tmp_path)
    with open(paths["csv"]) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(small_comparison.reports)
    assert json.loads(paths["json"].read_text())["summary"][0]["n_seeds"] == 10
    assert "F1 mean" in format_table(small_comparison.summary)
    f1_png = plot_f1(small_comparison.summary, tmp_path / "f1.png")
    sizes = {name: {b.value: sum(1 for x in bins.values() if x is b) for b in Bin} for name, bins in small_fixture.partitions.items()}
    part_png = plot_partition(sizes, tmp_path / "p.png")
    loss_png = plot_loss_curves({"incall": [0.7, 0.5, 0.4]}, tmp_path / "l.png")
    for p in (f1_png, part_png, loss_png):
        assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    again = plot_f1(small_comparison.summary, tmp_path / "f1b.png")
    assert again.read_bytes() == f1_png.read_bytes()


def test_weak_fixture_self_training_direction():
    syn = generate(preset("weak", n_sentences=6000, seed=0))
    fx = build_fixture(syn, shipped_indicators(INDICATORS))
    deltas = compare_systems(fx.data, list(range(10))).semisup_delta()
    assert np.mean(list(deltas.values())) >= 0.0, deltas
