"""Light HTTP backend for the curation UI and other clients.

Stateless by design: records live only in the client; the server holds the
immutable schema, vocabularies, and crosswalks loaded at startup. Every
non-2xx response body is a machine-readable error object, and every 2xx
body is byte-identical to the corresponding library call's serialization.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import forge
from .crosswalk import BUNDLED_CROSSWALKS, Crosswalk, load_bundled_crosswalk
from .record import MetadataRecord, RecordParseError, canonical_json, from_payload, to_json
from .schema import SchemaDefinition, load_bundled_schema, serialize_schema
from .validator import completeness, validate

CONVERT_TARGETS = {
    "codemeta-json": ("ersmeta-codemeta", "codemeta-json"),
    "cff-yaml-like": ("ersmeta-cff", "cff-yaml-like"),
    "ersmeta": (None, "ersmeta"),
}


@dataclass(frozen=True)
class ApiError(Exception):
    status: int
    code: str
    message: str
    detail: Optional[Any] = None
    headers: Optional[dict] = None

    def body(self) -> dict:
        payload: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.detail is not None:
            payload["detail"] = self.detail
        return payload


def _json_response(text: str, status: int = 200, headers: Optional[dict] = None) -> Response:
    return Response(content=text, status_code=status, media_type="application/json", headers=headers)


def create_app(
    schema: Optional[SchemaDefinition] = None,
    fixtures_dir: Optional[str | Path] = None,
    allow_origin: str = "*",
    transport: Optional[forge.Transport] = None,
) -> FastAPI:
    """Build the service around an immutable schema and transport choice.

    With `fixtures_dir` set, extraction replays recorded responses instead
    of calling the live forges (demo and test mode). An explicit `transport`
    overrides both.
    """
    schema = schema or load_bundled_schema()
    schema_document = serialize_schema(schema)
    if transport is None:
        if fixtures_dir is not None:
            transport = forge.FixtureTransport(fixtures_dir)
        else:
            transport = forge.HttpTransport()

    crosswalks: dict[str, Crosswalk] = {}
    if schema.id == "ersmeta":
        for name in BUNDLED_CROSSWALKS:
            crosswalks[name] = load_bundled_crosswalk(name)

    app = FastAPI(title="ersmeta service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[allow_origin] if allow_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError) -> Response:
        return _json_response(canonical_json(exc.body()), status=exc.status, headers=exc.headers)

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException) -> Response:
        # framework-raised errors (unknown route, bad method) keep the API error shape
        payload = {"code": "http_error", "message": str(exc.detail)}
        return _json_response(canonical_json(payload), status=exc.status_code)

    async def _body_json(request: Request) -> dict:
        try:
            payload = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise ApiError(400, "malformed_json", f"request body is not valid JSON: {exc}")
        if not isinstance(payload, dict):
            raise ApiError(400, "malformed_json", "request body must be a JSON object")
        return payload

    def _record_from(payload: dict) -> MetadataRecord:
        if "record" not in payload:
            raise ApiError(400, "missing_field", "request body is missing the 'record' field")
        try:
            return from_payload(payload["record"], schema, strict=False)
        except RecordParseError as exc:
            raise ApiError(400, "invalid_record", str(exc))

    @app.get("/api/schema")
    async def get_schema() -> Response:
        return _json_response(schema_document)

    @app.get("/api/vocabularies/{vocab_id}")
    async def get_vocabulary(vocab_id: str) -> Response:
        vocab = schema.vocabulary_by_id(vocab_id)
        if vocab is None:
            raise ApiError(404, "unknown_vocabulary", f"no vocabulary with id {vocab_id!r}")
        payload = {
            "id": vocab.id,
            "kind": vocab.kind,
            "sourceNote": vocab.source_note,
            "terms": [
                {"label": t.label} if t.iri is None else {"label": t.label, "iri": t.iri}
                for t in vocab.terms
            ],
        }
        return _json_response(canonical_json(payload))

    @app.post("/api/extract")
    async def post_extract(request: Request) -> Response:
        payload = await _body_json(request)
        url = payload.get("url")
        if not url or not isinstance(url, str):
            raise ApiError(400, "missing_field", "request body is missing the 'url' field")
        try:
            record, report = forge.extract(url, transport, schema)
        except forge.UnsupportedHostError as exc:
            raise ApiError(400, "unsupported_forge", str(exc))
        except forge.MalformedUrlError as exc:
            raise ApiError(400, "malformed_url", str(exc))
        except forge.NotFoundError as exc:
            raise ApiError(404, "repo_not_found", str(exc))
        except forge.RateLimitError as exc:
            headers = {}
            if exc.retry_after is not None:
                headers["Retry-After"] = str(int(exc.retry_after))
            raise ApiError(429, "rate_limited", str(exc), headers=headers or None)
        except forge.ForgeError as exc:
            raise ApiError(502, "upstream_error", str(exc))
        body = canonical_json({
            "record": json.loads(to_json(record, schema)),
            "extractionReport": report.to_payload(),
        })
        return _json_response(body)

    @app.post("/api/validate")
    async def post_validate(request: Request) -> Response:
        record = _record_from(await _body_json(request))
        report = validate(record, schema, strict=False)
        return _json_response(canonical_json(report.to_payload()))

    @app.post("/api/completeness")
    async def post_completeness(request: Request) -> Response:
        record = _record_from(await _body_json(request))
        report = completeness(record, schema)
        return _json_response(canonical_json(report.to_payload()))

    @app.post("/api/convert")
    async def post_convert(request: Request) -> Response:
        payload = await _body_json(request)
        record = _record_from(payload)
        target = payload.get("target")
        if target not in CONVERT_TARGETS:
            raise ApiError(400, "unknown_target", f"unknown conversion target {target!r}")
        crosswalk_name, target_format = CONVERT_TARGETS[target]
        if crosswalk_name is None:
            from .crosswalk import ConversionReport

            document = to_json(record, schema)
            report_payload = ConversionReport(
                mapped=tuple((k, k) for k in record.values), dropped=(), synthesized=()
            ).to_payload()
        else:
            crosswalk = crosswalks.get(crosswalk_name)
            if crosswalk is None:
                raise ApiError(400, "unknown_target", f"no crosswalk loaded for target {target!r}")
            from .crosswalk import convert as convert_fn

            document, report = convert_fn(record, crosswalk, target_format)
            report_payload = report.to_payload()
        body = canonical_json({"document": document, "conversionReport": report_payload})
        return _json_response(body)

    @app.post("/api/export")
    async def post_export(request: Request) -> Response:
        record = _record_from(await _body_json(request))
        document = to_json(record, schema)
        name_value = record.first("name")
        base = getattr(name_value, "content", None) or "record"
        safe = re.sub(r"[^A-Za-z0-9._-]+", "-", base).strip("-") or "record"
        headers = {"Content-Disposition": f'attachment; filename="{safe}.metadata.json"'}
        return _json_response(document, headers=headers)

    return app
