from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from flagit.eval import synthetic
from flagit.project import Project, init_project, run_pipeline
from flagit.sampling import manifest_ids
from flagit.service import create_app

from conftest import write_synthetic_project


@pytest.fixture
def sampled_project(tmp_path):
    root = tmp_path / "p"
    gold = write_synthetic_project(root, n=600)
    run_pipeline(root, through="sample")
    return root, gold


def client(root) -> TestClient:
    return TestClient(create_app(root))


def test_empty_project_lists_nothing(tmp_path):
    init_project(tmp_path, indicators=[])
    assert client(tmp_path).get("/indicators").json() == []


def test_indicator_progress(tagged_project, sampled_project):
    rows = client(tagged_project).get("/indicators").json()
    assert [r["name"] for r in rows] == list(synthetic.INDICATORS)
    assert all(r["sampled"] == 140 and r["labeled"] == 140 and r["remaining"] == 0 for r in rows)
    rows = client(sampled_project[0]).get("/indicators").json()
    assert all(r["remaining"] == 140 and r["labeled"] == 0 for r in rows)


def test_label_batch_and_post(sampled_project):
    root, gold = sampled_project
    c = client(root)
    batch = c.get("/label-batch", params={"indicator": "incall", "n": 10}).json()
    assert len(batch["items"]) == 10 and batch["remaining"] == 140
    first = batch["items"][0]
    assert set(first) == {"sent_id", "raw", "bin", "spans"}
    r = c.post("/labels", json={"sent_id": first["sent_id"], "indicator": "incall", "label": True})
    assert r.status_code == 200 and r.json()["remaining"] == 139
    again = c.get("/label-batch", params={"indicator": "incall", "n": 10}).json()
    assert first["sent_id"] not in {i["sent_id"] for i in again["items"]}
    assert again["remaining"] == 139


def test_spans_come_from_rule_matches(sampled_project):
    root, _ = sampled_project
    items = client(root).get("/label-batch", params={"indicator": "incall", "n": 140}).json()["items"]
    with_spans = [i for i in items if i["bin"] != "NULL"]
    assert with_spans and all(i["spans"] for i in with_spans)
    assert all(not i["spans"] for i in items if i["bin"] == "NULL")
    span = with_spans[0]["spans"][0]
    assert span["category"] in {"P", "SP", "N", "SN"} and span["start"] <= span["end"]


def test_duplicate_label_is_journaled(sampled_project):
    root, _ = sampled_project
    c = client(root)
    sid = manifest_ids(Project(root).manifest("risky"))[0]
    for label in (True, False):
        r = c.post("/labels", json={"sent_id": sid, "indicator": "risky", "label": label})
        assert r.status_code == 200
    lines = [json.loads(x) for x in (root / "labels" / "labels.jsonl").read_text().splitlines()]
    assert [(d["sent_id"], d["label"]) for d in lines] == [(sid, True), (sid, False)]
    assert Project(root).label_store().labels("risky") == {sid: False}


@pytest.mark.parametrize(
    "body",
    [{"sent_id": "x"}, {"sent_id": "x", "indicator": "incall", "label": "yes"}, [], "not json"],
)
def test_malformed_label_is_400(sampled_project, body):
    c = client(sampled_project[0])
    if body == "not json":
        r = c.post("/labels", content=b"{oops", headers={"content-type": "application/json"})
    else:
        r = c.post("/labels", json=body)
    assert r.status_code == 400
    assert set(r.json()) == {"error", "hint"}


def test_label_errors(sampled_project):
    root, _ = sampled_project
    c = client(root)
    r = c.post("/labels", json={"sent_id": "x", "indicator": "nope", "label": True})
    assert r.status_code == 404 and "nope" in r.json()["error"]
    r = c.post("/labels", json={"sent_id": "0000000000000000", "indicator": "incall", "label": True})
    assert r.status_code == 409
    assert c.get("/label-batch", params={"indicator": "nope"}).status_code == 404


def test_flags_require_tagging(sampled_project):
    r = client(sampled_project[0]).get("/flags", params={"indicator": "incall"})
    assert r.status_code == 409
    assert "tag" in r.json()["hint"]


def test_flags_filter_limit_and_order(tagged_project):
    c = client(tagged_project)
    items = c.get("/flags", params={"indicator": "movement", "limit": 100000}).json()["items"]
    assert len(items) == len(Project(tagged_project).corpus())
    keys = [(-i["prob"], i["sent_id"]) for i in items]
    assert keys == sorted(keys)
    high = c.get("/flags", params={"indicator": "movement", "min_prob": 0.9, "limit": 100000}).json()["items"]
    assert high == [i for i in items if i["prob"] >= 0.9]
    assert len(c.get("/flags", params={"indicator": "movement", "limit": 5}).json()["items"]) <= 5
    tagged = {}
    for line in (tagged_project / "artifacts" / "tagged.jsonl").read_text().splitlines():
        d = json.loads(line)
        tagged[d["sent_id"]] = d["probs"]["movement"]
    assert all(tagged[i["sent_id"]] == i["prob"] for i in items)


def test_partition_stats(tagged_project):
    stats = client(tagged_project).get("/partition-stats", params={"indicator": "incall"}).json()
    assert list(stats["bins"]) == ["P_OR_SP", "N_OR_SN", "SP_AND_N", "SN_AND_P", "SP_AND_SN", "P_AND_N", "NULL"]
    assert stats["total"] == len(Project(tagged_project).corpus())


def test_stats_follow_repartition(tagged_project):
    c = client(tagged_project)
    before = c.get("/partition-stats", params={"indicator": "incall"}).json()
    (tagged_project / "indicators" / "incall" / "rules.flagit").write_text("")
    Project(tagged_project).run_stage("partition", ["incall"])
    after = c.get("/partition-stats", params={"indicator": "incall"}).json()
    assert after["bins"]["NULL"] == after["total"] == before["total"]
    assert before["bins"]["NULL"] < before["total"]


def test_labeling_round_trip_loses_nothing(sampled_project):
    """Label a whole 140-item manifest the way the UI does: fetch a batch, answer, repeat."""
    root, gold = sampled_project
    c = client(root)
    posted = []
    while True:
        batch = c.get("/label-batch", params={"indicator": "outcall", "n": 7}).json()
        if not batch["items"]:
            break
        for item in batch["items"]:
            label = gold[item["sent_id"]]["outcall"]
            ack = c.post("/labels", json={"sent_id": item["sent_id"], "indicator": "outcall", "label": label}).json()
            posted.append(item["sent_id"])
            assert ack["remaining"] == 140 - len(posted)
    assert sorted(posted) == sorted(manifest_ids(Project(root).manifest("outcall")))
    assert len(set(posted)) == 140
    labels = Project(root).label_store().labels("outcall")
    assert labels == {sid: gold[sid]["outcall"] for sid in posted}
    assert Project(root).label_gate(["outcall"]) == {"outcall": []}
