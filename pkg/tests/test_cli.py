from __future__ import annotations

import json
import logging

import pytest

from flagit.cli import main
from flagit.eval import synthetic
from flagit.corpus import RawDocument
from flagit.project import Project, load_config, run_pipeline
from flagit.sampling import manifest_ids

from conftest import build_project, write_synthetic_project


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fresh(tmp_path):
    root = tmp_path / "p"
    gold = write_synthetic_project(root, n=500)
    return root, gold


def test_init_refuses_to_overwrite(capsys, fresh):
    root, _ = fresh
    code, _, err = run(capsys, "init", "-p", root)
    assert code == 1 and "already exists" in err


def test_missing_config_is_an_error(capsys, tmp_path):
    code, _, err = run(capsys, "status", "-p", tmp_path)
    assert code == 1 and "flagit init" in err


def test_ingest_stats_and_determinism(capsys, tmp_path):
    root = tmp_path / "p"
    root.mkdir()
    docs = [RawDocument(f"d{i}", f"Incall only\nnew in town number {i}") for i in range(100)]
    synthetic.write_documents(docs, root / "documents.jsonl")
    assert run(capsys, "init", "-p", root)[0] == 0
    code, out, _ = run(capsys, "ingest", "-p", root, "--json")
    stats = json.loads(out)
    assert code == 0
    assert (stats["documents"], stats["sentences"], stats["duplicates"]) == (100, 101, 99)
    first = (root / "artifacts" / "corpus.jsonl").read_bytes()
    run(capsys, "ingest", "-p", root)
    assert (root / "artifacts" / "corpus.jsonl").read_bytes() == first


def test_empty_corpus_warns(capsys, tmp_path, caplog):
    root = tmp_path / "p"
    root.mkdir()
    (root / "documents.jsonl").write_text("")
    run(capsys, "init", "-p", root)
    with caplog.at_level(logging.WARNING, logger="flagit"):
        code, out, _ = run(capsys, "ingest", "-p", root, "--json")
    assert code == 0 and json.loads(out)["sentences"] == 0
    assert "empty corpus" in caplog.text


def test_partition_prints_bin_sizes(capsys, fresh):
    root, _ = fresh
    run(capsys, "ingest", "-p", root)
    code, out, _ = run(capsys, "partition", "-p", root, "--indicator", "incall")
    assert code == 0
    assert "incall" in out and "P_OR_SP" in out and "NULL" in out
    assert not Project(root).stage_valid("partition", "outcall")


def test_sample_with_seed_is_reproducible(capsys, fresh):
    root, _ = fresh
    run(capsys, "ingest", "-p", root)
    run(capsys, "partition", "-p", root)
    run(capsys, "sample", "-p", root, "--seed", "7")
    first = (root / "artifacts" / "samples" / "incall.json").read_bytes()
    run(capsys, "sample", "-p", root, "--seed", "7")
    assert (root / "artifacts" / "samples" / "incall.json").read_bytes() == first
    assert json.loads(first)["seed"] == 7


def test_dag_enforcement_names_missing_stage(capsys, fresh):
    root, _ = fresh
    code, _, err = run(capsys, "tag", "-p", root)
    assert code == 2 and "ingest" in err
    run(capsys, "run", "-p", root, "--through", "sample")
    code, _, err = run(capsys, "train", "-p", root)
    assert code == 2 and "label" in err


def test_tag_before_train_names_train(capsys, fresh):
    root, gold = fresh
    run_pipeline(root, through="sample")
    from flagit.project import label_from_gold

    label_from_gold(Project(root), gold)
    run_pipeline(root, through="label")
    code, _, err = run(capsys, "tag", "-p", root)
    assert code == 2 and "train" in err


def test_run_stops_at_label_gate(capsys, fresh):
    root, _ = fresh
    code, _, err = run(capsys, "run", "-p", root)
    assert code == 2
    assert "unlabeled" in err or "label" in err
    assert Project(root).stage_valid("sample")


def _gold_file(tmp_path, gold):
    path = tmp_path / "gold.jsonl"
    path.write_text("".join(json.dumps({"sent_id": s, "labels": l}) + "\n" for s, l in gold.items()))
    return path


def test_label_from_gold_satisfies_gate(capsys, fresh, tmp_path):
    root, gold = fresh
    run(capsys, "run", "-p", root, "--through", "sample")
    code, out, _ = run(capsys, "label", "-p", root, "--from-gold", _gold_file(tmp_path, gold), "--json")
    assert code == 0
    assert json.loads(out)["remaining"] == {n: 0 for n in synthetic.INDICATORS}
    assert Project(root).stage_valid("label")


def test_interactive_label_quit_resume_and_skip(capsys, fresh, monkeypatch):
    root, gold = fresh
    run(capsys, "run", "-p", root, "--through", "sample")
    ids = manifest_ids(Project(root).manifest("incall"))
    answers = iter(["maybe", "y", "n", "q"])
    monkeypatch.setattr("builtins.input", lambda _: next(answers))
    code, out, _ = run(capsys, "label", "-p", root, "--indicator", "incall")
    assert code == 0
    store = Project(root).label_store()
    assert store.labels("incall") == {ids[0]: True, ids[1]: False}
    # resume: skip the first unlabeled one, then EOF quits
    seen = []

    def ask(prompt):
        if len(seen) == 1:
            raise EOFError
        seen.append(prompt)
        return "s"

    monkeypatch.setattr("builtins.input", ask)
    code, out, _ = run(capsys, "label", "-p", root, "--indicator", "incall", "--json")
    raw = {x.sent_id: x.raw for x in Project(root).corpus()}
    assert f"[incall] 1/{len(ids) - 2}  {raw[ids[2]]}" in out
    assert ids[2] not in Project(root).label_store().labels("incall")
    assert json.loads(out[out.index("{"):])["remaining"]["incall"] == len(ids) - 2
    assert not Project(root).stage_valid("label", "incall")


def test_full_run_and_status(capsys, tmp_path):
    root = tmp_path / "p"
    build_project(root, through="eval", n=500, indicators=("incall", "movement"))
    code, out, _ = run(capsys, "status", "-p", root, "--json")
    assert code == 0 and all(json.loads(out).values())
    reports = root / "artifacts" / "reports"
    for name in ("comparison.csv", "comparison_summary.csv", "comparison.json", "figures/f1.png", "figures/partition.png"):
        assert (reports / name).exists(), name
    assert {p.name for p in (root / "artifacts" / "models").iterdir()} >= {"incall.fgm", "movement.fgm"}
    code, out, err = run(capsys, "run", "-p", root)
    assert code == 0 and err.count("up to date") == 8
    # an ad-hoc seed list leaves eval stale for the configured seeds
    run(capsys, "eval", "-p", root, "--seeds", "0")
    assert not Project(root).stage_valid("eval")


def test_rule_edit_invalidates_downstream(capsys, tagged_project):
    p = Project(tagged_project)
    assert p.stage_valid("tag")
    rules = tagged_project / "indicators" / "incall" / "rules.flagit"
    rules.write_text(rules.read_text() + 'P: "tonight"\n')
    p = Project(tagged_project)
    assert p.stage_valid("partition", "outcall")
    assert not p.stage_valid("partition", "incall")
    assert not p.stage_valid("tag")
    code, _, err = run(capsys, "tag", "-p", tagged_project)
    assert code == 2 and "partition" in err and "incall" in err


def test_relabel_invalidates_training(tagged_project):
    p = Project(tagged_project)
    sid = manifest_ids(p.manifest("risky"))[0]
    store = p.label_store()
    store.record_label(sid, "risky", not store.labels("risky")[sid])
    p = Project(tagged_project)
    assert p.stage_valid("sample", "risky") and not p.stage_valid("train", "risky")
    assert p.stage_valid("train", "incall")


def test_seed_override_changes_keys(tagged_project):
    assert Project(tagged_project).stage_valid("sample")
    assert not Project(tagged_project, seed=99).stage_valid("sample")


def test_indicator_without_rules_runs_through(tmp_path):
    root = tmp_path / "p"
    gold = write_synthetic_project(root, n=600, indicators=("movement",))
    (root / "indicators" / "movement" / "rules.flagit").unlink()
    run_pipeline(root, through="sample")
    p = Project(root)
    sizes = p.partition("movement")["sizes"]
    assert sizes["NULL"] == len(p.corpus()) and sum(sizes.values()) == sizes["NULL"]
    assert len(p.manifest("movement")["bins"]["NULL"]) == 140
    from flagit.project import label_from_gold

    label_from_gold(p, gold)
    run_pipeline(root, through="tag")
    assert Project(root).stage_valid("tag")


def test_config_roundtrip(tagged_project):
    cfg = load_config(tagged_project / "flagit.yaml")
    assert cfg.names == list(synthetic.INDICATORS)
    assert cfg.sampling.budget == 140 and cfg.self_train.fraction_per_end == 0.45


def test_unknown_indicator_is_an_error(capsys, tagged_project):
    code, _, err = run(capsys, "partition", "-p", tagged_project, "--indicator", "nope")
    assert code == 1 and "nope" in err
