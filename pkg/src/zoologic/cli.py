"""Command-line entry point.

Subcommands: ingest (detections to fact programs), ask (one question
against one image), repl (interactive loop), eval (fixture accuracy),
serve (HTTP API). Exit codes are a scripting contract: 0 success,
1 eval mismatch, 2 usage or input error, 3 query-parse failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

import uvicorn

from .dataset import (
    ConfigError,
    DatasetError,
    DatasetStore,
    load_config,
    load_dataset_json,
    load_dataset_yolo,
    load_store,
)
from .grounding import GroundingError, ground, load_names, load_rules
from .language import LanguageError, UnclassifiableQuery
from .logic import format_program
from .overlay import render_overlay
from .reasoner import NoEntities, answer, answer_json, answer_payload, canonical_json

OK = 0
EVAL_MISMATCH = 1
USAGE_ERROR = 2
QUERY_FAILURE = 3


def _fail(message: str, code: int = USAGE_ERROR) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zoologic", description="query animal scenes with logic programs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="turn detection files into fact programs")
    ingest.add_argument("--detections", required=True, help="JSON file or YOLO label dir")
    ingest.add_argument("--format", choices=("json", "yolo"), default="json")
    ingest.add_argument("--images", required=True, help="image directory")
    ingest.add_argument("--names", help="YOLO names file (one label per line)")
    ingest.add_argument("--threshold", type=float, default=None)
    ingest.add_argument("--out", help="write one .pl file per image here instead of stdout")
    ingest.add_argument("--rules", help="rules file overriding the built-in set")

    ask = sub.add_parser("ask", help="answer one question about one image")
    ask.add_argument("--dataset", required=True, help="dataset config file")
    ask.add_argument("--image", required=True, help="image id")
    ask.add_argument("--question", required=True)
    ask.add_argument("--overlay", help="write an SVG overlay here (location answers)")

    repl = sub.add_parser("repl", help="interactive question loop")
    repl.add_argument("--dataset", required=True, help="dataset config file")

    ev = sub.add_parser("eval", help="score fixture questions against expected answers")
    ev.add_argument("--dataset", required=True, help="dataset config file")
    ev.add_argument("--fixtures", required=True, help="JSONL of image_id/question/expected")

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--config", required=True, help="dataset config file")
    return parser


def _load_sets(args) -> list:
    if args.format == "yolo":
        if not args.names:
            raise DatasetError("yolo format needs --names")
        names = load_names(args.names)
        kwargs = {} if args.threshold is None else {"threshold": args.threshold}
        return load_dataset_yolo(args.detections, args.images, names, **kwargs)
    with open(args.detections, "r", encoding="utf-8") as fh:
        kwargs = {} if args.threshold is None else {"threshold": args.threshold}
        return load_dataset_json(fh.read(), images_dir=args.images, **kwargs)


def cmd_ingest(args) -> int:
    try:
        sets = _load_sets(args)
        rules = load_rules(args.rules) if args.rules else None
    except (GroundingError, DatasetError, OSError) as exc:
        return _fail(str(exc))
    for dset in sets:
        text = format_program(ground(dset, rules).program)
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            path = os.path.join(args.out, f"{dset.image.id}.pl")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            print(f"% image {dset.image.id}")
            print(text, end="")
            print()
    return OK


def _open_store(config_path: str) -> DatasetStore:
    return load_store(load_config(config_path))


def cmd_ask(args) -> int:
    try:
        store = _open_store(args.dataset)
    except (DatasetError, GroundingError, OSError) as exc:
        return _fail(str(exc))
    kb = store.get(args.image)
    if kb is None:
        return _fail(f"unknown image id {args.image!r}")
    try:
        query = store.parse_question(args.question)
        ans = answer(kb, query)
    except (UnclassifiableQuery, NoEntities) as exc:
        return _fail(str(exc), QUERY_FAILURE)
    print(answer_json(ans))
    if args.overlay:
        if ans.task == "location":
            with open(args.overlay, "w", encoding="utf-8") as fh:
                fh.write(render_overlay(kb.image, ans))
        else:
            print(f"note: no overlay written for {ans.task} answers", file=sys.stderr)
    return OK


def _print_answer(ans, show_trace: bool) -> None:
    payload = answer_payload(ans)
    brief = {k: payload[k] for k in ("task", "entities", "results")}
    print(canonical_json(brief))
    if show_trace:
        for step in ans.trace:
            clause = step.clause or "(no clause)"
            print(f"  {step.goal}  =>  {step.outcome}  [{clause}]")


def cmd_repl(args) -> int:
    try:
        store = _open_store(args.dataset)
    except (DatasetError, GroundingError, OSError) as exc:
        return _fail(str(exc))
    selected: Optional[str] = None
    show_trace = False
    print("type a question, or :images, :image <id>, :trace on|off, :quit")
    while True:
        try:
            line = input("?- ").strip()
        except EOFError:
            print()
            return OK
        if not line:
            continue
        if line.startswith(":"):
            parts = line.split()
            if parts[0] == ":quit":
                return OK
            if parts[0] == ":images":
                for image_id in store.ids():
                    counts = store.images[image_id].class_counts
                    print(f"{image_id}: {canonical_json(counts)}")
            elif parts[0] == ":image" and len(parts) == 2:
                if store.get(parts[1]) is None:
                    print(f"unknown image id {parts[1]!r}")
                else:
                    selected = parts[1]
                    print(f"selected {selected}")
            elif parts[0] == ":trace" and len(parts) == 2 and parts[1] in ("on", "off"):
                show_trace = parts[1] == "on"
                print(f"trace {parts[1]}")
            else:
                print("commands: :images, :image <id>, :trace on|off, :quit")
            continue
        if selected is None:
            print("no image selected (use :image <id>)")
            continue
        try:
            ans = answer(store.get(selected), store.parse_question(line))
        except (UnclassifiableQuery, NoEntities) as exc:
            print(f"cannot answer: {exc}")
            continue
        _print_answer(ans, show_trace)


def cmd_eval(args) -> int:
    try:
        store = _open_store(args.dataset)
        with open(args.fixtures, "r", encoding="utf-8") as fh:
            lines = [line.strip() for line in fh if line.strip()]
    except (DatasetError, GroundingError, OSError) as exc:
        return _fail(str(exc))
    if not lines:
        return _fail("fixture file is empty")
    totals = {}
    correct = {}
    failures = []
    for lineno, line in enumerate(lines, start=1):
        try:
            fixture = json.loads(line)
            image_id = fixture["image_id"]
            question = fixture["question"]
            expected = fixture["expected"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            return _fail(f"fixtures line {lineno}: {exc}")
        kb = store.get(image_id)
        if kb is None:
            return _fail(f"fixtures line {lineno}: unknown image id {image_id!r}")
        try:
            ans = answer(kb, store.parse_question(question))
            payload = answer_payload(ans)
            got = {"task": payload["task"], "results": payload["results"]}
        except (UnclassifiableQuery, NoEntities) as exc:
            got = {"error": type(exc).__name__}
        task = got.get("task", expected.get("task", "unknown"))
        totals[task] = totals.get(task, 0) + 1
        if canonical_json(got) == canonical_json(expected):
            correct[task] = correct.get(task, 0) + 1
        else:
            failures.append((image_id, question, expected, got))
    for task in sorted(totals):
        hits = correct.get(task, 0)
        pct = 100.0 * hits / totals[task]
        print(f"{task}: {hits}/{totals[task]} ({pct:.1f}%)")
    for image_id, question, expected, got in failures:
        print(f"MISMATCH {image_id} {question!r}")
        print(f"  expected {canonical_json(expected)}")
        print(f"  got      {canonical_json(got)}")
    return EVAL_MISMATCH if failures else OK


def cmd_serve(args) -> int:
    from .service import create_app

    try:
        config = load_config(args.config)
        store = load_store(config)
    except (DatasetError, GroundingError, OSError) as exc:
        return _fail(str(exc))
    frontend = os.path.join("frontend", "dist")
    app = create_app(store, frontend_dir=frontend if os.path.isdir(frontend) else None)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    except OSError as exc:
        return _fail(f"cannot bind {config.host}:{config.port}: {exc}")
    return OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "ask": cmd_ask,
    "repl": cmd_repl,
    "eval": cmd_eval,
    "serve": cmd_serve,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except LanguageError as exc:
        return _fail(str(exc), QUERY_FAILURE)
    except ConfigError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
