"""Project directory, YAML configuration and the resumable stage pipeline.

A project is a directory holding ``flagit.yaml``, the human label journal
under ``labels/`` and everything derived under ``artifacts/``. Stages run
in a fixed order::

    ingest -> partition -> sample -> label -> train -> semisup -> tag -> eval

Each completed stage leaves a marker in ``.flagit/stages/`` recording a key
over its inputs: its own config slice, the input files it reads and the key
of the stage before it. A marker is valid only while that key still matches,
so editing a rules file or relabeling a sentence invalidates everything
downstream of the stage that reads it.
"""

from __future__ import annotations

import hashlib
import json
import logging
import shutil
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Mapping

import yaml
from filelock import FileLock

from . import classifier as clf
from .corpus import AnnotatedSentence, build_corpus, get_annotator, read_corpus, read_documents, write_corpus
from .errors import FlagItError, LabelingGateError, StageError
from .eval.baselines import parse_bins
from .eval.compare import IndicatorData, ProtocolConfig, compare_systems, write_reports, format_table
from .eval.metrics import evaluate
from .eval import plotting
from .les import IndicatorRules, load_indicator
from .les.partition import BIN_ORDER, Bin, assign_bins
from .sampling import LabelStore, SamplingConfig, manifest_ids, redistributive_sample, sample_manifest, split_train_test
from .semisup import SelfTrainConfig, self_train, tag_corpus

logger = logging.getLogger(__name__)

CONFIG_NAME = "flagit.yaml"
STAGES = ("ingest", "partition", "sample", "label", "train", "semisup", "tag", "eval")
PER_INDICATOR = frozenset({"partition", "sample", "label", "train", "semisup"})
BUILTIN_PREFIX = "builtin:"


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IndicatorConfig:
    name: str
    path: str
    threshold: float = 0.5
    les_positive_bins: tuple[str, ...] = (Bin.P_OR_SP.value,)

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"{self.name}: threshold must lie in [0, 1]")
        parse_bins(self.les_positive_bins)


@dataclass(frozen=True)
class ProjectConfig:
    corpus: str
    indicators: tuple[IndicatorConfig, ...]
    annotator: str = "heuristic"
    seed: int = 0
    sampling: SamplingConfig = SamplingConfig()
    split_ratio: float = 0.7
    hyperparams: clf.Hyperparams = clf.Hyperparams()
    features: clf.FeatureConfig = clf.FeatureConfig()
    self_train: SelfTrainConfig = SelfTrainConfig()
    pool_size: int | None = None
    eval_seeds: tuple[int, ...] = tuple(range(10))

    def indicator(self, name: str) -> IndicatorConfig:
        for ind in self.indicators:
            if ind.name == name:
                return ind
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [ind.name for ind in self.indicators]

    def to_dict(self) -> dict:
        return {
            "corpus": self.corpus,
            "annotator": self.annotator,
            "seed": self.seed,
            "indicators": {
                ind.name: {"path": ind.path, "threshold": ind.threshold, "les_positive_bins": list(ind.les_positive_bins)}
                for ind in self.indicators
            },
            "sampling": {"budget": self.sampling.budget},
            "split": {"ratio": self.split_ratio},
            "classifier": {
                "epochs": self.hyperparams.epochs,
                "lr0": self.hyperparams.lr0,
                "dim": self.hyperparams.dim,
                **self.features.to_dict(),
            },
            "self_train": asdict(self.self_train) | {"pool_size": self.pool_size},
            "eval": {"seeds": list(self.eval_seeds)},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ProjectConfig":
        d = dict(d)
        if "corpus" not in d:
            raise FlagItError(f"{CONFIG_NAME}: missing required key 'corpus'")
        raw_inds = d.get("indicators") or {}
        if isinstance(raw_inds, list):
            raw_inds = {name: {} for name in raw_inds}
        indicators = []
        for name, spec in raw_inds.items():
            spec = spec or {}
            indicators.append(
                IndicatorConfig(
                    name,
                    str(spec.get("path", BUILTIN_PREFIX + name)),
                    float(spec.get("threshold", 0.5)),
                    tuple(spec.get("les_positive_bins", [Bin.P_OR_SP.value])),
                )
            )
        c = dict(d.get("classifier") or {})
        hp = clf.Hyperparams(
            epochs=int(c.get("epochs", 10)), lr0=float(c.get("lr0", 0.1)), dim=int(c.get("dim", 50)), seed=int(d.get("seed", 0))
        )
        feat = clf.FeatureConfig.from_dict({k: c[k] for k in ("word_ngrams", "char_ngrams", "buckets", "hash_seed") if k in c})
        st = dict(d.get("self_train") or {})
        pool_size = st.pop("pool_size", None)
        return cls(
            corpus=str(d["corpus"]),
            indicators=tuple(indicators),
            annotator=str(d.get("annotator", "heuristic")),
            seed=int(d.get("seed", 0)),
            sampling=SamplingConfig(budget=int((d.get("sampling") or {}).get("budget", 140)), seed=int(d.get("seed", 0))),
            split_ratio=float((d.get("split") or {}).get("ratio", 0.7)),
            hyperparams=hp,
            features=feat,
            self_train=SelfTrainConfig(**st),
            pool_size=None if pool_size is None else int(pool_size),
            eval_seeds=tuple(int(s) for s in (d.get("eval") or {}).get("seeds", range(10))),
        )


def load_config(path: str | Path) -> ProjectConfig:
    with open(path, encoding="utf-8") as fh:
        return ProjectConfig.from_dict(yaml.safe_load(fh) or {})


def dump_config(config: ProjectConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(config.to_dict(), fh, sort_keys=False)


# --------------------------------------------------------------------------
# Helpers
# --------------------------------------------------------------------------


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str).encode()).hexdigest()


def _write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    tmp.replace(path)


def _read_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


# --------------------------------------------------------------------------
# Project
# --------------------------------------------------------------------------


class Project:
    """A project directory with cached access to its artifacts."""

    def __init__(self, root: str | Path, seed: int | None = None):
        self.root = Path(root).resolve()
        cfg_path = self.root / CONFIG_NAME
        if not cfg_path.exists():
            raise FlagItError(f"no {CONFIG_NAME} in {self.root}; run `flagit init` first")
        self.config = load_config(cfg_path)
        if seed is not None:
            # per-invocation override; stage keys include the seed
            self.config = replace(
                self.config,
                seed=seed,
                sampling=replace(self.config.sampling, seed=seed),
                hyperparams=replace(self.config.hyperparams, seed=seed),
            )
        self._corpus: list[AnnotatedSentence] | None = None
        self._rules: dict[str, IndicatorRules] = {}
        self._keys: dict[tuple[str, str | None], str] = {}

    # paths ----------------------------------------------------------------

    @property
    def artifacts(self) -> Path:
        return self.root / "artifacts"

    @property
    def state_dir(self) -> Path:
        return self.root / ".flagit"

    @property
    def corpus_path(self) -> Path:
        return self.artifacts / "corpus.jsonl"

    @property
    def labels_path(self) -> Path:
        return self.root / "labels" / "labels.jsonl"

    @property
    def tagged_path(self) -> Path:
        return self.artifacts / "tagged.jsonl"

    @property
    def reports_dir(self) -> Path:
        return self.artifacts / "reports"

    def partition_path(self, ind: str) -> Path:
        return self.artifacts / "partition" / f"{ind}.json"

    def manifest_path(self, ind: str) -> Path:
        return self.artifacts / "samples" / f"{ind}.json"

    def split_path(self, ind: str) -> Path:
        return self.artifacts / "splits" / f"{ind}.json"

    def model_path(self, ind: str, initial: bool = False) -> Path:
        return self.artifacts / "models" / f"{ind}{'.initial' if initial else ''}.fgm"

    def lock(self, timeout: float = -1) -> FileLock:
        self.state_dir.mkdir(parents=True, exist_ok=True)
        return FileLock(str(self.state_dir / "lock"), timeout=timeout)

    def indicator_dir(self, ind: str) -> Path:
        path = self.config.indicator(ind).path
        if path.startswith(BUILTIN_PREFIX):
            from .eval.fixtures import shipped_indicator_dir

            return shipped_indicator_dir() / path[len(BUILTIN_PREFIX) :]
        p = Path(path)
        return p if p.is_absolute() else self.root / p

    # artifacts ------------------------------------------------------------

    def corpus(self) -> list[AnnotatedSentence]:
        if self._corpus is None:
            self._corpus = read_corpus(self.corpus_path)
        return self._corpus

    def rules(self, ind: str) -> IndicatorRules:
        if ind not in self._rules:
            self._rules[ind] = load_indicator(self.indicator_dir(ind), ind)
        return self._rules[ind]

    def partition(self, ind: str) -> dict:
        return _read_json(self.partition_path(ind))

    def manifest(self, ind: str) -> dict:
        return _read_json(self.manifest_path(ind))

    def label_store(self) -> LabelStore:
        return LabelStore(self.labels_path)

    def load_model(self, ind: str, initial: bool = False) -> clf.IndicatorModel:
        return clf.load_model(self.model_path(ind, initial))

    # stage keys -----------------------------------------------------------

    def _rules_digest(self, ind: str) -> dict:
        d = self.indicator_dir(ind)
        files = [d / "rules.flagit"] + sorted((d / "glossaries").glob("*.txt")) if d.exists() else []
        return {str(f.relative_to(d)): _sha256_file(f) for f in files if f.exists()}

    def _sampled_labels(self, ind: str) -> list:
        if not self.manifest_path(ind).exists():
            return []
        have = self.label_store().labels(ind)
        return sorted((sid, have[sid]) for sid in manifest_ids(self.manifest(ind)) if sid in have)

    def stage_inputs(self, stage: str, ind: str | None = None) -> dict:
        c = self.config
        if stage == "ingest":
            src = self.root / c.corpus
            return {"corpus": _sha256_file(src) if src.exists() else None, "annotator": c.annotator}
        if stage == "partition":
            return {"rules": self._rules_digest(ind)}
        if stage == "sample":
            return {"budget": c.sampling.budget, "seed": c.seed}
        if stage == "label":
            return {"labels": _digest(self._sampled_labels(ind))}
        if stage == "train":
            return {"ratio": c.split_ratio, "seed": c.seed, "hp": asdict(c.hyperparams), "features": c.features.to_dict()}
        if stage == "semisup":
            return {"self_train": asdict(c.self_train), "pool_size": c.pool_size}
        if stage == "tag":
            return {ind.name: ind.threshold for ind in c.indicators}
        if stage == "eval":
            return {"seeds": list(c.eval_seeds), "les": {ind.name: sorted(ind.les_positive_bins) for ind in c.indicators}}
        raise KeyError(stage)

    def stage_key(self, stage: str, ind: str | None = None) -> str:
        """Key over a stage's inputs and its upstream keys (per indicator where the stage is)."""
        cache = (stage, ind)
        if cache not in self._keys:
            i = STAGES.index(stage)
            if stage in PER_INDICATOR:
                upstream = self.stage_key(STAGES[i - 1], ind if STAGES[i - 1] in PER_INDICATOR else None)
            elif i == 0:
                upstream = ""
            elif STAGES[i - 1] in PER_INDICATOR:
                upstream = _digest({n: self.stage_key(STAGES[i - 1], n) for n in self.config.names})
            else:
                upstream = self.stage_key(STAGES[i - 1])
            self._keys[cache] = _digest({"stage": stage, "indicator": ind, "upstream": upstream, "inputs": self.stage_inputs(stage, ind)})
        return self._keys[cache]

    def invalidate_keys(self) -> None:
        self._keys.clear()

    def marker_path(self, stage: str, ind: str | None = None) -> Path:
        base = self.state_dir / "stages"
        return base / stage / f"{ind}.json" if stage in PER_INDICATOR else base / f"{stage}.json"

    def marker(self, stage: str, ind: str | None = None) -> dict | None:
        p = self.marker_path(stage, ind)
        return _read_json(p) if p.exists() else None

    def stage_valid(self, stage: str, ind: str | None = None) -> bool:
        if stage in PER_INDICATOR and ind is None:
            return all(self.stage_valid(stage, n) for n in self.config.names)
        m = self.marker(stage, ind)
        if m is None or m.get("key") != self.stage_key(stage, ind):
            return False
        # an eval run with ad-hoc --seeds does not count as the configured one
        return stage != "eval" or m["summary"].get("seeds") == list(self.config.eval_seeds)

    def status(self) -> dict[str, bool]:
        self.invalidate_keys()
        out, ok = {}, True
        for s in STAGES:
            ok = ok and self.stage_valid(s)
            out[s] = ok
        return out

    def require(self, stage: str, indicators: Iterable[str] | None = None) -> None:
        """Raise StageError naming the earliest incomplete stage up to ``stage``.

        Per-indicator stages are checked only for ``indicators`` (default all).
        """
        names = list(indicators) if indicators is not None else self.config.names
        for s in STAGES[: STAGES.index(stage) + 1]:
            if s in PER_INDICATOR:
                bad = [n for n in names if not self.stage_valid(s, n)]
                if bad:
                    raise StageError(
                        s, f"stage {s!r} is not complete for {', '.join(bad)}; run `flagit {s}` first"
                    )
            elif not self.stage_valid(s):
                raise StageError(s)

    def _mark(self, stage: str, ind: str | None, summary: dict | None = None) -> None:
        _write_json(self.marker_path(stage, ind), {"stage": stage, "indicator": ind, "key": self.stage_key(stage, ind), "summary": summary or {}})
        self.invalidate_keys()

    # stages ---------------------------------------------------------------

    def run_stage(self, stage: str, indicators: Iterable[str] | None = None, **kwargs) -> dict:
        """Run one stage after checking its predecessors; returns a summary.

        ``indicators`` restricts a per-indicator stage to those names.
        """
        if stage not in STAGES:
            raise KeyError(f"unknown stage {stage!r}")
        names = list(indicators) if indicators is not None else self.config.names
        for n in names:
            self.config.indicator(n)
        self.invalidate_keys()
        i = STAGES.index(stage)
        if i:
            self.require(STAGES[i - 1], names if stage in PER_INDICATOR else None)
        runner = getattr(self, f"_run_{stage}")
        if stage in PER_INDICATOR:
            summary = {}
            for n in names:
                summary[n] = runner(n, **kwargs)
                self._mark(stage, n, summary[n])
            return summary
        summary = runner(**kwargs)
        self._mark(stage, None, summary)
        return summary

    def _run_ingest(self) -> dict:
        src = self.root / self.config.corpus
        if not src.exists():
            raise FlagItError(f"corpus file {src} not found")
        corpus, stats = build_corpus(read_documents(src), get_annotator(self.config.annotator))
        if not corpus:
            logger.warning("ingest: %s produced an empty corpus", src)
        self.artifacts.mkdir(parents=True, exist_ok=True)
        write_corpus(corpus, self.corpus_path)
        self._corpus = corpus
        _write_json(self.artifacts / "ingest_stats.json", stats)
        return stats

    def _run_partition(self, ind: str) -> dict:
        self._rules.pop(ind, None)
        bins = assign_bins(self.rules(ind).rules, self.corpus())
        counts = {b.value: 0 for b in BIN_ORDER}
        for b in bins.values():
            counts[b.value] += 1
        _write_json(
            self.partition_path(ind),
            {"indicator": ind, "n_rules": len(self.rules(ind).rules), "sizes": counts, "bins": {sid: b.value for sid, b in bins.items()}},
        )
        return counts

    def _run_sample(self, ind: str) -> dict:
        by_bin: dict[Bin, list[str]] = {b: [] for b in BIN_ORDER}
        for sid, b in self.partition(ind)["bins"].items():
            by_bin[Bin(b)].append(sid)
        sample = redistributive_sample(by_bin, self.config.sampling)
        _write_json(self.manifest_path(ind), sample_manifest(ind, self.config.seed, sample))
        return {b.value: len(sample[b]) for b in BIN_ORDER}

    def label_gate(self, indicators: Iterable[str] | None = None) -> dict[str, list[str]]:
        store = self.label_store()
        names = list(indicators) if indicators is not None else self.config.names
        return {ind: store.missing(ind, manifest_ids(self.manifest(ind))) for ind in names}

    def _run_label(self, ind: str) -> dict:
        missing = self.label_gate([ind])[ind]
        if missing:
            raise LabelingGateError(ind, missing)
        labels = self.human_labels(ind)
        return {"labeled": len(labels), "positive": sum(labels.values())}

    def human_labels(self, ind: str) -> dict[str, bool]:
        have = self.label_store().labels(ind)
        return {sid: have[sid] for sid in manifest_ids(self.manifest(ind)) if sid in have}

    def texts(self) -> dict[str, str]:
        return {s.sent_id: s.lower for s in self.corpus()}

    def _run_train(self, ind: str) -> dict:
        texts = self.texts()
        train, test = split_train_test(self.human_labels(ind), self.config.split_ratio, self.config.seed)
        _write_json(self.split_path(ind), {"indicator": ind, "seed": self.config.seed, "train": train, "test": test})
        model = clf.train_texts([texts[s] for s in train], list(train.values()), self.config.hyperparams, self.config.features, ind)
        self.model_path(ind, initial=True).parent.mkdir(parents=True, exist_ok=True)
        clf.save_model(model, self.model_path(ind, initial=True))
        return {"train": len(train), "test": len(test), "final_loss": model.metadata["final_loss"]}

    def pool_ids(self, ind: str) -> list[str]:
        """Unsampled sentences in corpus order, capped at ``pool_size``."""
        sampled = set(manifest_ids(self.manifest(ind)))
        pool = [s.sent_id for s in self.corpus() if s.sent_id not in sampled]
        return pool if self.config.pool_size is None else pool[: self.config.pool_size]

    def _run_semisup(self, ind: str) -> dict:
        texts = self.texts()
        split = _read_json(self.split_path(ind))
        train_set = [(sid, texts[sid], y) for sid, y in split["train"].items()]
        pool = [(sid, texts[sid]) for sid in self.pool_ids(ind)]
        initial = self.load_model(ind, initial=True)
        model = self_train(
            train_set, pool, self.config.self_train, self.config.hyperparams, self.config.features, ind, initial_model=initial
        )
        clf.save_model(model, self.model_path(ind))
        threshold = self.config.indicator(ind).threshold
        test = split["test"]
        ids = list(test)
        metrics = {}
        for name, mdl in (("initial", initial), ("final", model)):
            probs = mdl.predict_proba_many([texts[s] for s in ids])
            rep = evaluate({s: bool(p >= threshold) for s, p in zip(ids, probs)}, test, indicator=ind, system=name, seed=self.config.seed)
            metrics[name] = rep.to_dict()
        _write_json(self.artifacts / "metrics" / f"{ind}.json", metrics)
        return {name: round(m["f1"], 4) for name, m in metrics.items()}

    def _run_tag(self) -> dict:
        models = {ind: self.load_model(ind) for ind in self.config.names}
        thresholds = {ind.name: ind.threshold for ind in self.config.indicators}
        bins = {ind: self.partition(ind)["bins"] for ind in self.config.names}
        flagged = {ind: 0 for ind in models}
        tmp = self.tagged_path.with_suffix(".jsonl.tmp")
        n = 0
        with open(tmp, "w", encoding="utf-8") as fh:
            for t in tag_corpus(models, self.corpus(), thresholds, bins=bins):
                fh.write(json.dumps(t.to_dict(), sort_keys=True) + "\n")
                n += 1
                for ind, f in t.flags.items():
                    flagged[ind] += f
        tmp.replace(self.tagged_path)
        return {"sentences": n, "flagged": flagged}

    def comparison_inputs(self) -> list[IndicatorData]:
        texts = self.texts()
        data = []
        for ind_cfg in self.config.indicators:
            ind = ind_cfg.name
            bins = {sid: Bin(b) for sid, b in self.partition(ind)["bins"].items()}
            data.append(
                IndicatorData(
                    ind, self.human_labels(ind), texts, bins, self.pool_ids(ind), ind_cfg.threshold, parse_bins(ind_cfg.les_positive_bins)
                )
            )
        return data

    def _run_eval(self, seeds: Iterable[int] | None = None) -> dict:
        seeds = list(self.config.eval_seeds if seeds is None else seeds)
        protocol = ProtocolConfig(self.config.split_ratio, self.config.hyperparams, self.config.features, self.config.self_train)
        comparison = compare_systems(self.comparison_inputs(), seeds, protocol)
        paths = write_reports(comparison, self.reports_dir)
        figures = self.reports_dir / "figures"
        plotting.plot_f1(comparison.summary, figures / "f1.png")
        plotting.plot_partition({ind: self.partition(ind)["sizes"] for ind in self.config.names}, figures / "partition.png")
        plotting.plot_loss_curves(
            {ind: self.load_model(ind).metadata.get("loss_curve", []) for ind in self.config.names}, figures / "loss.png"
        )
        (self.reports_dir / "comparison.txt").write_text(format_table(comparison.summary) + "\n", encoding="utf-8")
        return {
            "seeds": seeds,
            "reports": {k: str(v.relative_to(self.root)) for k, v in paths.items()},
            "semisup_delta": comparison.semisup_delta(),
        }


# --------------------------------------------------------------------------
# Entry points
# --------------------------------------------------------------------------


def init_project(
    root: str | Path,
    corpus: str = "documents.jsonl",
    indicators: Iterable[str] = ("incall", "outcall", "movement", "risky", "multi_girl"),
    copy_rules: bool = True,
    **overrides,
) -> Path:
    """Create ``flagit.yaml``; with ``copy_rules`` the shipped rules are copied in for editing."""
    from .eval.fixtures import shipped_indicator_dir

    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    if (root / CONFIG_NAME).exists():
        raise FlagItError(f"{root / CONFIG_NAME} already exists")
    inds = []
    for name in indicators:
        path = BUILTIN_PREFIX + name
        if copy_rules and (shipped_indicator_dir() / name).exists():
            shutil.copytree(shipped_indicator_dir() / name, root / "indicators" / name, dirs_exist_ok=True)
            path = f"indicators/{name}"
        inds.append(IndicatorConfig(name, path))
    cfg = replace(ProjectConfig(corpus=corpus, indicators=tuple(inds)), **overrides)
    dump_config(cfg, root / CONFIG_NAME)
    (root / "labels").mkdir(exist_ok=True)
    return root / CONFIG_NAME


def run_pipeline(
    root: str | Path,
    through: str = "eval",
    force: bool = False,
    progress: Callable[[str, dict | None], None] | None = None,
    seed: int | None = None,
) -> dict[str, dict | str]:
    """Run every stage up to ``through``, skipping stages whose marker is still valid.

    Halts with LabelingGateError at the label stage when sampled sentences
    are unlabeled. Holds the project lock for the whole run.
    """
    project = Project(root, seed)
    done = {}
    with project.lock():
        for stage in STAGES[: STAGES.index(through) + 1]:
            project.invalidate_keys()
            if not force and project.stage_valid(stage):
                done[stage] = "up to date"
                if progress:
                    progress(stage, None)
                continue
            done[stage] = project.run_stage(stage)
            if progress:
                progress(stage, done[stage])
    return done


def label_from_gold(
    project: Project, gold: Mapping[str, Mapping[str, bool]], indicators: Iterable[str] | None = None
) -> int:
    """Record labels for every sampled sentence from a ``sent_id -> indicator -> bool`` map.

    Stands in for a human labeler in demos and tests.
    """
    store = LabelStore(project.labels_path, known_ids={s.sent_id for s in project.corpus()})
    n = 0
    for ind in indicators if indicators is not None else project.config.names:
        for sid in store.missing(ind, manifest_ids(project.manifest(ind))):
            if sid in gold and ind in gold[sid]:
                store.record_label(sid, ind, bool(gold[sid][ind]))
                n += 1
    return n


__all__ = [
    "CONFIG_NAME",
    "IndicatorConfig",
    "Project",
    "ProjectConfig",
    "STAGES",
    "dump_config",
    "init_project",
    "label_from_gold",
    "load_config",
    "run_pipeline",
]
