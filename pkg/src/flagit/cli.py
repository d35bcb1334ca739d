"""Command-line interface.

Exit codes: 0 on success, 2 when a stage gate blocks progress (missing
predecessor stage or unlabeled sampled sentences), 1 on any other error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .corpus import sentence_id
from .errors import FlagItError, LabelingGateError, StageError
from .project import PER_INDICATOR, STAGES, Project, init_project, label_from_gold, run_pipeline
from .sampling import LabelStore, manifest_ids

logger = logging.getLogger("flagit")

EXIT_OK, EXIT_ERROR, EXIT_GATE = 0, 1, 2


def _emit(args, payload, text: str | None = None) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    elif text is not None:
        print(text)
    else:
        for k, v in payload.items():
            print(f"{k}: {json.dumps(v, sort_keys=True, default=str)}")


def _seeds(value: str) -> list[int]:
    if ".." in value:
        lo, hi = value.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(s) for s in value.split(",") if s.strip()]


# ---------------------------------------------------------------- commands


def cmd_init(args) -> int:
    indicators = [s for s in args.indicators.split(",") if s]
    path = init_project(args.project, corpus=args.corpus, indicators=indicators, copy_rules=not args.builtin)
    _emit(args, {"config": str(path)}, f"wrote {path}")
    return EXIT_OK


def cmd_synth(args) -> int:
    from .eval import synthetic

    if args.preset == "planted":
        syn = synthetic.planted_corpus(synthetic.PlantedConfig(n_sentences=args.n, seed=args.seed))
    else:
        syn = synthetic.generate(synthetic.preset(args.preset, n_sentences=args.n, seed=args.seed))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    synthetic.write_documents(syn.documents, out)
    payload = {"documents": len(syn.documents), "sentences": len(syn.gold), "out": str(out)}
    if args.gold:
        with open(args.gold, "w", encoding="utf-8") as fh:
            for lower, labels in syn.gold.items():
                fh.write(json.dumps({"sent_id": sentence_id(lower), "labels": labels}, sort_keys=True) + "\n")
        payload["gold"] = args.gold
    _emit(args, payload)
    return EXIT_OK


def _indicators(args) -> list[str] | None:
    return [args.indicator] if getattr(args, "indicator", None) else None


def cmd_stage(args) -> int:
    project = Project(args.project, args.seed)
    kwargs = {}
    if args.command == "eval" and args.seeds:
        kwargs["seeds"] = _seeds(args.seeds)
    if args.command in PER_INDICATOR:
        kwargs["indicators"] = _indicators(args)
    elif args.indicator:
        logger.warning("--indicator is ignored by %s, which covers all indicators", args.command)
    with project.lock():
        summary = project.run_stage(args.command, **kwargs)
    text = None
    if args.command == "eval":
        text = (project.reports_dir / "comparison.txt").read_text(encoding="utf-8").rstrip()
    _emit(args, summary, text)
    return EXIT_OK


def cmd_label(args) -> int:
    project = Project(args.project, args.seed)
    project.require("sample", _indicators(args))
    if args.from_gold:
        gold = {}
        with open(args.from_gold, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    d = json.loads(line)
                    gold[d["sent_id"]] = d["labels"]
        n = label_from_gold(project, gold, _indicators(args))
        logger.info("recorded %d labels from %s", n, args.from_gold)
    else:
        n = _interactive_label(project, args.indicator)
    missing = {ind: len(ids) for ind, ids in project.label_gate(_indicators(args)).items()}
    complete = [ind for ind, k in missing.items() if k == 0]
    if complete:
        with project.lock():
            project.run_stage("label", complete)
    _emit(args, {"recorded": n, "remaining": missing})
    return EXIT_OK


def _interactive_label(project: Project, only: str | None) -> int:
    """Prompt y/n/s/q for every unlabeled sampled sentence; labels persist as they are given."""
    raw = {s.sent_id: s.raw for s in project.corpus()}
    store = LabelStore(project.labels_path, known_ids=raw.keys())
    names = [only] if only else project.config.names
    n = 0
    for ind in names:
        todo = store.missing(ind, manifest_ids(project.manifest(ind)))
        for k, sid in enumerate(todo, 1):
            print(f"\n[{ind}] {k}/{len(todo)}  {raw[sid]}")
            while True:
                try:
                    answer = input("  positive? [y]es / [n]o / [s]kip / [q]uit: ").strip().lower()
                except EOFError:
                    answer = "q"
                if answer in ("y", "n", "s", "q"):
                    break
            if answer == "q":
                return n
            if answer == "s":
                continue
            store.record_label(sid, ind, answer == "y")
            n += 1
    return n


def cmd_run(args) -> int:
    def progress(stage, summary):
        if not args.json:
            print(f"{stage:<10} {'up to date' if summary is None else 'done'}", file=sys.stderr)

    done = run_pipeline(args.project, through=args.through, force=args.force, progress=progress, seed=args.seed)
    _emit(args, done, None if args.json else f"completed through {args.through}")
    return EXIT_OK


def cmd_status(args) -> int:
    project = Project(args.project)
    status = project.status()
    lines = [f"{s:<10} {'ok' if ok else '-'}" for s, ok in status.items()]
    _emit(args, status, "\n".join(lines))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(args.project), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flagit", description="Indicator mining: rules, budgeted labeling, self-trained tagging.")
    parser.add_argument("--version", action="version", version=f"flagit {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--project", "-p", default=".", help="project directory (default: current directory)")
    common.add_argument("--json", action="store_true", help="print machine-readable JSON")
    common.add_argument("--verbose", "-v", action="store_true")
    scoped = argparse.ArgumentParser(add_help=False)
    scoped.add_argument("--indicator", help="restrict per-indicator stages to this indicator")
    scoped.add_argument("--seed", type=int, help="override the project seed for this invocation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", parents=[common], help="create flagit.yaml in the project directory")
    p.add_argument("--corpus", default="documents.jsonl", help="documents file, relative to the project")
    p.add_argument("--indicators", default="incall,outcall,movement,risky,multi_girl")
    p.add_argument("--builtin", action="store_true", help="reference the shipped rules instead of copying them")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic document corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--gold", help="also write gold labels (JSON lines: sent_id, labels)")
    p.add_argument("--preset", default="strong", choices=["strong", "weak", "rules_only", "planted"])
    p.add_argument("-n", type=int, default=5000, help="number of distinct sentences")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    for stage in ("ingest", "partition", "sample", "train", "semisup", "tag", "eval"):
        p = sub.add_parser(stage, parents=[common, scoped], help=f"run the {stage} stage")
        if stage == "eval":
            p.add_argument("--seeds", help="comma list or range like 0..9 (default: from config)")
        p.set_defaults(func=cmd_stage)

    p = sub.add_parser("label", parents=[common, scoped], help="label the sampled sentences")
    p.add_argument("--from-gold", help="take labels from a gold file instead of prompting")
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("run", parents=[common], help="run all stages that are not up to date")
    p.add_argument("--seed", type=int, help="override the project seed for this invocation")
    p.add_argument("--through", default="eval", choices=STAGES)
    p.add_argument("--force", action="store_true", help="rerun stages even when up to date")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("status", parents=[common], help="show which stages are up to date")
    p.set_defaults(func=cmd_status)

    p = sub.add_parser("serve", parents=[common], help="serve the labeling/review HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (StageError, LabelingGateError) as e:
        print(f"flagit: {e}", file=sys.stderr)
        return EXIT_GATE
    except (FlagItError, ValueError, KeyError, OSError) as e:
        print(f"flagit: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
