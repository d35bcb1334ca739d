from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from flagit.corpus import sentence_id  # noqa: E402
from flagit.eval import synthetic  # noqa: E402
from flagit.project import Project, init_project, label_from_gold, run_pipeline  # noqa: E402


def write_synthetic_project(root: Path, n: int = 700, seed: int = 0, indicators=synthetic.INDICATORS, **overrides) -> dict:
    """Synthetic documents plus a fresh config; returns gold labels keyed by sent_id."""
    syn = synthetic.generate(synthetic.preset("strong", n_sentences=n, seed=seed))
    root.mkdir(parents=True, exist_ok=True)
    synthetic.write_documents(syn.documents, root / "documents.jsonl")
    overrides.setdefault("eval_seeds", (0, 1))
    overrides.setdefault("pool_size", 300)
    init_project(root, indicators=list(indicators), **overrides)
    return {sentence_id(lower): labels for lower, labels in syn.gold.items()}


def build_project(root: Path, through: str = "tag", **kw) -> Project:
    gold = write_synthetic_project(root, **kw)
    run_pipeline(root, through="sample")
    label_from_gold(Project(root), gold)
    run_pipeline(root, through=through)
    (root / "gold.json").write_text(json.dumps(gold))
    return Project(root)


@pytest.fixture(scope="session")
def tagged_project_template(tmp_path_factory) -> Path:
    return build_project(tmp_path_factory.mktemp("template") / "proj", through="tag").root


@pytest.fixture
def tagged_project(tagged_project_template, tmp_path) -> Path:
    dest = tmp_path / "proj"
    shutil.copytree(tagged_project_template, dest)
    return dest


# acceptance reporting -------------------------------------------------------

ACCEPTANCE: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion; printed now and in the session summary."""

    def record(name: str, passed: bool, detail: str) -> bool:
        line = f"ACCEPTANCE {'PASS' if passed else 'FAIL'} {name}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
