"""HTTP API over one project, for the labeling and review UI.

Every endpoint is a read-only view over pipeline artifacts except
``POST /labels``. Loaded artifacts are cached per stage marker key, so a
stage rerun by the CLI is picked up on the next request.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, StrictBool

from .les.matcher import match_rule
from .les.partition import BIN_ORDER
from .project import Project
from .sampling import LabelStore, manifest_ids


class ApiError(Exception):
    def __init__(self, status: int, error: str, hint: str = ""):
        self.status, self.error, self.hint = status, error, hint


class LabelIn(BaseModel):
    sent_id: str
    indicator: str
    label: StrictBool


class _Cache:
    """Values keyed by (name, marker key); recomputed when the key moves."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict[str, tuple[object, object]] = {}

    def get(self, name: str, key, build):
        with self._lock:
            hit = self._data.get(name)
            if hit is not None and hit[0] == key:
                return hit[1]
        value = build()
        with self._lock:
            self._data[name] = (key, value)
        return value


def create_app(project_dir: str | Path) -> FastAPI:
    project = Project(project_dir)
    cache = _Cache()
    app = FastAPI(title="flagit", version="1")
    app.state.project = project
    store_box: dict[str, LabelStore] = {}
    store_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse({"error": exc.error, "hint": exc.hint}, status_code=exc.status)

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        fields = ", ".join(".".join(str(p) for p in e.get("loc", ())) for e in exc.errors())
        return JSONResponse(
            {"error": f"malformed request: {fields or 'invalid body'}", "hint": 'expected {"sent_id": str, "indicator": str, "label": bool}'},
            status_code=400,
        )

    def marker_key(stage: str, ind: str | None = None):
        m = project.marker(stage, ind)
        return None if m is None else m.get("key")

    def check_indicator(ind: str) -> None:
        if ind not in project.config.names:
            raise ApiError(404, f"unknown indicator {ind!r}", f"known indicators: {', '.join(project.config.names) or 'none'}")

    def corpus_index() -> dict:
        key = marker_key("ingest")
        if key is None:
            raise ApiError(409, "corpus not ingested", "run `flagit ingest`")
        return cache.get("corpus", key, lambda: {s.sent_id: s for s in project.corpus()})

    def store() -> LabelStore:
        with store_lock:
            if "s" not in store_box:
                store_box["s"] = LabelStore(project.labels_path)
            return store_box["s"]

    def sampled(ind: str) -> list[str]:
        key = marker_key("sample", ind)
        if key is None:
            raise ApiError(409, f"no sample manifest for {ind!r}", "run `flagit sample`")
        return cache.get(f"sample:{ind}", key, lambda: manifest_ids(project.manifest(ind)))

    def partition(ind: str) -> dict:
        key = marker_key("partition", ind)
        if key is None:
            raise ApiError(409, f"{ind!r} is not partitioned", "run `flagit partition`")
        return cache.get(f"partition:{ind}", key, lambda: project.partition(ind))

    def rules(ind: str):
        return cache.get(f"rules:{ind}", marker_key("partition", ind), lambda: project.rules(ind).rules)

    def spans(ind: str, sentence) -> list[dict]:
        out = []
        for rule in rules(ind):
            for start, end in match_rule(rule, sentence).spans:
                text = " ".join(t.text for t in sentence.tokens[start : end + 1])
                out.append({"rule_id": rule.rule_id, "category": rule.category.value, "start": start, "end": end, "text": text})
        return out

    def remaining(ind: str) -> int:
        return len(store().missing(ind, sampled(ind)))

    def tagged(ind: str) -> list[tuple[float, str, bool]]:
        key = marker_key("tag")
        if key is None:
            raise ApiError(409, "tagging incomplete", "run `flagit tag` (or `flagit run`) first")

        def build():
            rows: dict[str, list] = {n: [] for n in project.config.names}
            with open(project.tagged_path, encoding="utf-8") as fh:
                for line in fh:
                    d = json.loads(line)
                    for n, p in d["probs"].items():
                        rows.setdefault(n, []).append((p, d["sent_id"], d["flags"][n]))
            for n in rows:
                rows[n].sort(key=lambda r: (-r[0], r[1]))
            return rows

        return cache.get("tagged", key, build).get(ind, [])

    @app.get("/indicators")
    def indicators():
        out = []
        for ind in project.config.names:
            entry = {"name": ind, "sampled": 0, "labeled": 0, "remaining": 0, "positive": 0}
            if marker_key("sample", ind) is not None:
                ids = sampled(ind)
                have = store().labels(ind)
                done = [sid for sid in ids if sid in have]
                entry.update(sampled=len(ids), labeled=len(done), remaining=len(ids) - len(done), positive=sum(have[s] for s in done))
            out.append(entry)
        return out

    @app.get("/label-batch")
    def label_batch(indicator: str, n: int = Query(10, ge=0, le=1000)):
        check_indicator(indicator)
        todo = store().missing(indicator, sampled(indicator))
        index = corpus_index()
        bins = partition(indicator)["bins"]
        items = []
        for sid in todo[:n]:
            s = index[sid]
            items.append({"sent_id": sid, "raw": s.raw, "bin": bins.get(sid), "spans": spans(indicator, s)})
        return {"indicator": indicator, "items": items, "remaining": len(todo)}

    @app.post("/labels")
    def post_label(body: LabelIn):
        check_indicator(body.indicator)
        if body.sent_id not in set(sampled(body.indicator)):
            raise ApiError(409, f"{body.sent_id!r} is not in the {body.indicator!r} sample", "only sampled sentences can be labeled")
        ex = store().record_label(body.sent_id, body.indicator, body.label)
        return {"ok": True, "sent_id": body.sent_id, "indicator": body.indicator, "label": ex.label, "remaining": remaining(body.indicator)}

    @app.get("/flags")
    def flags(indicator: str, min_prob: float = Query(0.0, ge=0.0, le=1.0), limit: int = Query(100, ge=0)):
        check_indicator(indicator)
        rows = tagged(indicator)
        index = corpus_index()
        items = []
        for p, sid, flag in rows:
            if p < min_prob:
                break  # sorted descending
            if len(items) >= limit:
                break
            s = index.get(sid)
            items.append({"sent_id": sid, "prob": p, "flag": flag, "raw": s.raw if s else None})
        return {"indicator": indicator, "items": items}

    @app.get("/partition-stats")
    def partition_stats(indicator: str):
        check_indicator(indicator)
        sizes = partition(indicator)["sizes"]
        bins = {b.value: int(sizes.get(b.value, 0)) for b in BIN_ORDER}
        return {"indicator": indicator, "bins": bins, "total": sum(bins.values())}

    return app
