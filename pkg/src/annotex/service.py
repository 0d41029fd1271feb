"""HTTP service exposing the store, inference and search to clients.

Responses are plain JSON mirroring the store-file record schema, rendered
through :func:`api_json` so the CLI's structured output and the wire bodies
stay byte-identical.  Every package error maps to exactly one stable wire
code in :data:`ERROR_STATUS`.

Writers may assert optimistic concurrency by passing ``expect_version``; the
store version number is echoed in every response envelope.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response

from . import errors, infer, model, query, store as store_mod
from .model import ImplicitObject, TargetRef
from .store import Store

API_PREFIX = "/api/v1"

# wire code -> HTTP status; completeness over errors.AnnotexError subclasses
# is asserted by the test suite
ERROR_STATUS: dict[str, int] = {
    "EmptyAttribute": 400,
    "EmptyValueLabel": 400,
    "EmptyValueList": 400,
    "DuplicateValueLabel": 400,
    "BothHalvesEmpty": 400,
    "EmptyAnnotationObject": 400,
    "InvalidContextKind": 400,
    "InvalidRole": 400,
    "InvalidTier": 400,
    "InvalidSemanticFunction": 400,
    "EmptyId": 400,
    "SyntaxError": 400,
    "UnrewrittenBareValues": 400,
    "EmptyTokenList": 400,
    "UnresolvableToken": 400,
    "EmptyQueryValues": 400,
    "EmptyQueryAttribute": 400,
    "EmptyLabel": 400,
    "InvalidRulePack": 400,
    "InvalidBody": 400,
    "NotFound": 404,
    "DuplicateId": 409,
    "TargetInUse": 409,
    "VersionMismatch": 412,
    "TargetCycle": 422,
    "UnresolvableTarget": 422,
    "NoRuleFired": 422,
    "IoFailure": 500,
    "CorruptStoreFile": 500,
    "InternalError": 500,
}


def api_json(data) -> bytes:
    """Canonical response encoding (compact separators, UTF-8 kept raw)."""
    return json.dumps(data, ensure_ascii=False, separators=(",", ":"), allow_nan=False).encode("utf-8")


def _json_response(data, status_code: int = 200) -> Response:
    return Response(content=api_json(data), status_code=status_code, media_type="application/json")


def error_body(code: str, message: str, detail: Optional[dict] = None) -> dict:
    return {"error": {"code": code, "message": message, "detail": detail or {}}}


class _BadBody(errors.AnnotexError):
    code = "InvalidBody"


def search_response(store, q: str, strict: bool = False, match: str = "subset") -> dict:
    """Search envelope shared by the endpoint and the CLI structured output."""
    if match not in ("subset", "any"):
        raise _BadBody(f"match must be 'subset' or 'any', got {match!r}")
    ids, trace = query.search(q, store, strict=strict, match=match)
    return {
        "ids": list(ids),
        "trace": query.trace_to_json(trace) if trace is not None else None,
        "version": store.snapshot().version,
    }


def explicitate_response(store, body: dict) -> dict:
    if not isinstance(body, dict):
        raise _BadBody("explicitate body must be a JSON object")
    attribute = body.get("attribute")
    values = body.get("values")
    obj = model.make_implicit_object(
        attribute=attribute,
        values=model.value_list_from_json(values) if values is not None else None,
    )
    if not isinstance(obj, ImplicitObject):
        raise _BadBody("object is already explicit; nothing to infer")
    scope = None
    if body.get("scope"):
        scope_data = body["scope"]
        scope = TargetRef(tier=scope_data.get("tier", ""), id=scope_data.get("id", ""))
    require_all = body.get("match") == "all"
    candidates = infer.explicitate_object(obj, store, scope=scope, require_all=require_all)
    return {
        "candidates": [
            {
                "attribute": item.object.attribute,
                "values": model.value_list_to_json(item.object.values),
                "binding": {
                    "attribute": item.binding.fact.attribute,
                    "annotation": item.binding.fact.annotation_id,
                    "values": model.value_list_to_json(item.binding.fact.values),
                    "matched": list(item.binding.matched_labels),
                },
            }
            for item in candidates
        ],
        "resolved": bool(candidates),
        "version": store.snapshot().version,
    }


def graph_response(store, document_id: str) -> dict:
    snap = store.snapshot()
    doc = snap.get_document(document_id)

    def node(annotation_id: str) -> dict:
        record = snap.records[annotation_id]
        return {
            "annotation": model.record_to_json(record),
            "children": [node(child) for child in snap.children_of(annotation_id)],
        }

    roots = snap.annotations_on(TargetRef(doc.tier, doc.id))
    return {
        "document": store_mod.document_to_json(doc),
        "annotations": [node(rid) for rid in roots],
        "version": snap.version,
    }


async def _read_body(request: Request) -> dict:
    try:
        body = await request.json()
    except json.JSONDecodeError as exc:
        raise _BadBody(f"request body is not valid JSON: {exc.msg}")
    if not isinstance(body, dict):
        raise _BadBody("request body must be a JSON object")
    return body


def _check_version(store: Store, expect_version: Optional[int]) -> None:
    if expect_version is not None and store.snapshot().version != expect_version:
        raise errors.VersionMismatch(
            f"store version is {store.snapshot().version}, expected {expect_version}"
        )


def create_app(store: Store, ui_dir: Optional[str] = None,
               save_to: Optional[str] = None) -> FastAPI:
    """Build the app; with ``save_to`` every successful write flushes the
    store to that directory, so a served store survives restarts."""
    app = FastAPI(title="annotex", version="0.1.0", docs_url=None, redoc_url=None)

    def _flush() -> None:
        if save_to is not None:
            store_mod.save_store(store, save_to)

    @app.exception_handler(errors.AnnotexError)
    async def _annotex_error(request: Request, exc: errors.AnnotexError):
        status = ERROR_STATUS.get(exc.code, 500)
        return _json_response(error_body(exc.code, exc.message, exc.detail), status)

    @app.get(API_PREFIX + "/health")
    def health():
        snap = store.snapshot()
        return _json_response({
            "status": "ok",
            "format": store_mod.FORMAT_VERSION,
            "version": snap.version,
            "annotations": len(snap.records),
        })

    # -- annotations ---------------------------------------------------------

    @app.get(API_PREFIX + "/annotations")
    def list_annotations():
        snap = store.snapshot()
        return _json_response({
            "annotations": [model.record_to_json(r) for r in snap.records.values()],
            "version": snap.version,
        })

    @app.post(API_PREFIX + "/annotations")
    async def create_annotation(request: Request, expect_version: Optional[int] = None):
        body = await _read_body(request)
        _check_version(store, expect_version)
        body = dict(body)
        body.setdefault("id", store.allocate_id())
        now = model.utc_now()
        body.setdefault("created_at", now)
        body.setdefault("updated_at", now)
        record = model.record_from_json(body)
        store.add_annotation(record)
        _flush()
        return _json_response({"id": record.id, "version": store.snapshot().version}, 201)

    @app.get(API_PREFIX + "/annotations/{annotation_id}")
    def get_annotation(annotation_id: str):
        snap = store.snapshot()
        record = snap.get_annotation(annotation_id)
        return _json_response({
            "annotation": model.record_to_json(record),
            "version": snap.version,
        })

    @app.delete(API_PREFIX + "/annotations/{annotation_id}")
    def delete_annotation(annotation_id: str, expect_version: Optional[int] = None):
        _check_version(store, expect_version)
        store.delete_annotation(annotation_id)
        _flush()
        return _json_response({"deleted": annotation_id, "version": store.snapshot().version})

    # -- search and inference ---------------------------------------------------

    @app.get(API_PREFIX + "/search")
    def run_search(q: str = "", strict: bool = False, match: str = "subset"):
        return _json_response(search_response(store, q, strict=strict, match=match))

    @app.post(API_PREFIX + "/explicitate")
    async def run_explicitate(request: Request):
        body = await _read_body(request)
        return _json_response(explicitate_response(store, body))

    # -- documents and profiles ----------------------------------------------------

    @app.get(API_PREFIX + "/documents")
    def list_documents():
        snap = store.snapshot()
        return _json_response({
            "documents": [store_mod.document_to_json(d) for d in snap.documents.values()],
            "version": snap.version,
        })

    @app.post(API_PREFIX + "/documents")
    async def create_document(request: Request, expect_version: Optional[int] = None):
        body = await _read_body(request)
        _check_version(store, expect_version)
        doc = store_mod.document_from_json(body)
        store.add_document(doc)
        _flush()
        return _json_response({"id": doc.id, "version": store.snapshot().version}, 201)

    @app.get(API_PREFIX + "/documents/{document_id}")
    def get_document(document_id: str):
        snap = store.snapshot()
        return _json_response({
            "document": store_mod.document_to_json(snap.get_document(document_id)),
            "version": snap.version,
        })

    @app.get(API_PREFIX + "/profiles")
    def list_profiles():
        snap = store.snapshot()
        return _json_response({
            "profiles": [store_mod.profile_to_json(p) for p in snap.profiles.values()],
            "version": snap.version,
        })

    @app.post(API_PREFIX + "/profiles")
    async def create_profile(request: Request, expect_version: Optional[int] = None):
        body = await _read_body(request)
        _check_version(store, expect_version)
        profile = store_mod.profile_from_json(body)
        store.add_profile(profile)
        _flush()
        return _json_response({"id": profile.id, "version": store.snapshot().version}, 201)

    # -- annotation graph ------------------------------------------------------------

    @app.get(API_PREFIX + "/graph/{document_id}")
    def get_graph(document_id: str):
        return _json_response(graph_response(store, document_id))

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
