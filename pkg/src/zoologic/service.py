"""HTTP front door: dataset listing, image bytes, query answering.

Handlers share one immutable DatasetStore; a reload builds a fresh
store off to the side and swaps the reference in one assignment, so
requests always see either the old dataset or the new one, never a
mix. Answer JSON is serialized with the reasoner's canonical encoder,
which keeps service responses byte-identical to library calls.
"""
from __future__ import annotations

import mimetypes
import os
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .dataset import DatasetStore
from .language import UnclassifiableQuery
from .reasoner import NoEntities, answer, answer_payload, canonical_json


def _canonical_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, detail: str) -> JSONResponse:
    return JSONResponse({"detail": detail}, status_code=status_code)


def _query_rejection(code: str, message: str, question: str) -> Response:
    # Parse failures are part of the query API's contract, so they get a
    # structured body instead of the generic detail shape.
    return _canonical_response(
        {"code": code, "message": message, "question": question}, status_code=422
    )


def set_store(app: FastAPI, store: DatasetStore) -> None:
    """Atomic dataset swap; in-flight requests keep the store they read."""
    app.state.store = store


def create_app(store: DatasetStore, frontend_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="animal scene query service", docs_url=None, redoc_url=None)
    set_store(app, store)

    @app.get("/api/images")
    def list_images() -> Response:
        current = app.state.store
        payload = [
            {
                "id": image_id,
                "width": current.images[image_id].image.width,
                "height": current.images[image_id].image.height,
                "classes": current.images[image_id].class_counts,
            }
            for image_id in current.ids()
        ]
        return _canonical_response(payload)

    @app.get("/api/images/{image_id}")
    def get_image(image_id: str) -> Response:
        current = app.state.store
        kb = current.get(image_id)
        if kb is None:
            return _error(404, f"unknown image id {image_id!r}")
        path = kb.image.path
        if path is None:
            return _error(409, f"image {image_id!r} has no file on disk")
        if not os.path.exists(path):
            return _error(404, f"image file for {image_id!r} is missing")
        with open(path, "rb") as fh:
            data = fh.read()
        media_type = mimetypes.guess_type(path)[0] or "application/octet-stream"
        return Response(content=data, media_type=media_type)

    @app.post("/api/query")
    async def run_query(request: Request) -> Response:
        current = app.state.store
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body must be JSON")
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")
        image_id = body.get("image_id")
        question = body.get("question")
        if not isinstance(image_id, str) or not isinstance(question, str):
            return _error(400, "body needs string fields 'image_id' and 'question'")
        kb = current.get(image_id)
        if kb is None:
            return _error(404, f"unknown image id {image_id!r}")
        try:
            query = current.parse_question(question)
            ans = answer(kb, query)
        except UnclassifiableQuery as exc:
            return _query_rejection(
                "UnclassifiableQuery",
                f"no task prototype scored at or above tau (best {exc.best_score:.4f})",
                question,
            )
        except NoEntities:
            return _query_rejection(
                "NoEntities", "the question mentions no known animal class", question
            )
        return _canonical_response(
            {
                "answer": answer_payload(ans),
                "parsed_query": {
                    "raw": query.raw,
                    "entities": list(query.entities),
                    "task": query.task.active()[0],
                    "scores": dict(query.task.scores),
                },
            }
        )

    @app.get("/api/vocabulary")
    def vocabulary() -> Response:
        return _canonical_response(list(app.state.store.vocabulary))

    if frontend_dir is not None and os.path.isdir(frontend_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="console")

    return app
