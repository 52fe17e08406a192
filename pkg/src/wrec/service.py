"""HTTP/JSON facade: knowledge-base storage plus the engine endpoints.

Endpoints:
  PUT  /kb/{name}            store DSL text, returns {"version": n}
  GET  /kb/{name}            source text plus a structural summary
  POST /kb/{name}/recommend  ordered requirements -> solutions or repairs
  POST /kb/{name}/tests/run  regression test results
  POST /kb/{name}/diagnose   knowledge-base diagnosis against the tests

Requirement entry order travels as array order in the request body; the
server holds no session state. Responses are rendered through the shared
payload builders so the CLI's --json output is byte-identical. Slots swap
atomically under a lock, so a recommend during a PUT sees either the old or
the new version, never a mix.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from starlette.concurrency import run_in_threadpool

from . import payloads
from .dsl import ParseError, parse
from .kbtest import ORDERINGS, diagnose_kb, run_tests
from .model import (
    IntegerRangeDomain,
    KnowledgeBase,
    ModelError,
    Requirement,
    UnrepairableError,
)
from .repair import (
    DEFAULT_MAX_ALTERNATIVES,
    DEFAULT_N_DIAGNOSES,
    recommend,
    recommend_for_item,
)

KB_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*\Z")
_INT_VALUE_RE = re.compile(r"-?\d+\Z")


@dataclass(frozen=True)
class KbSlot:
    source: str
    kb: KnowledgeBase
    version: int


class KbStore:
    """Named knowledge-base slots, optionally mirrored to a directory.

    Every successful put parses the text first, then swaps the slot and
    bumps its version. With a directory configured, slots persist as
    `{name}.wrec` files and are loaded back on construction.
    """

    def __init__(self, directory: str | Path | None = None):
        self._slots: dict[str, KbSlot] = {}
        self._lock = threading.Lock()
        self._directory = Path(directory) if directory is not None else None
        if self._directory is not None:
            self._directory.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._directory.glob("*.wrec")):
                name = path.stem
                if not KB_NAME_RE.fullmatch(name):
                    continue
                source = path.read_text(encoding="utf-8")
                self._slots[name] = KbSlot(source=source, kb=parse(source), version=1)

    def put(self, name: str, source: str) -> int:
        """Parse and store; raises ParseError and leaves the slot untouched."""
        kb = parse(source)
        with self._lock:
            current = self._slots.get(name)
            version = 1 if current is None else current.version + 1
            self._slots[name] = KbSlot(source=source, kb=kb, version=version)
            if self._directory is not None:
                (self._directory / f"{name}.wrec").write_text(
                    source, encoding="utf-8"
                )
        return version

    def get(self, name: str) -> KbSlot | None:
        return self._slots.get(name)

    def names(self) -> list[str]:
        return sorted(self._slots)


def _json_response(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=payloads.to_json_bytes(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, message: str) -> Response:
    return _json_response(payloads.error_payload(message), status_code)


class _BadRequest(Exception):
    def __init__(self, message: str):
        self.message = message


async def _read_json_body(request: Request) -> dict:
    raw = await request.body()
    if not raw.strip():
        return {}
    try:
        body = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise _BadRequest(f"request body is not valid JSON: {exc}") from exc
    if not isinstance(body, dict):
        raise _BadRequest("request body must be a JSON object")
    return body


def _coerce_value(kb: KnowledgeBase, var: str, value):
    """Allow numeric strings for range variables and reject exotic types."""
    if isinstance(value, bool):
        raise _BadRequest(f"value for {var!r} must be a string or an integer")
    if isinstance(value, float):
        if not value.is_integer():
            raise _BadRequest(f"value for {var!r} must be a whole number")
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        if kb.has_user_var(var) and isinstance(
            kb.user_var(var).domain, IntegerRangeDomain
        ) and _INT_VALUE_RE.fullmatch(value.strip()):
            return int(value.strip())
        return value
    raise _BadRequest(f"value for {var!r} must be a string or an integer")


def _requirements_from_body(kb: KnowledgeBase, body: dict) -> list[Requirement]:
    raw = body.get("requirements", [])
    if not isinstance(raw, list):
        raise _BadRequest("requirements must be an array")
    requirements = []
    for rank, entry in enumerate(raw, start=1):
        if not isinstance(entry, dict) or "var" not in entry or "value" not in entry:
            raise _BadRequest(
                "each requirement must be an object with var and value"
            )
        var = entry["var"]
        if not isinstance(var, str):
            raise _BadRequest("requirement var must be a string")
        value = _coerce_value(kb, var, entry["value"])
        requirements.append(Requirement(var=var, value=value, entry_rank=rank))
    return requirements


def _positive_int(body: dict, key: str, default: int) -> int:
    value = body.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise _BadRequest(f"{key} must be a positive integer")
    return value


def create_app(store: KbStore | None = None) -> FastAPI:
    """The HTTP application; bring your own store to control persistence."""
    kb_store = store if store is not None else KbStore()
    app = FastAPI(title="wrec", docs_url=None, redoc_url=None)
    app.state.store = kb_store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def slot_or_none(name: str) -> KbSlot | None:
        return kb_store.get(name)

    @app.put("/kb/{name}")
    async def put_kb(name: str, request: Request) -> Response:
        if not KB_NAME_RE.fullmatch(name):
            return _error(400, f"invalid knowledge base name {name!r}")
        raw = await request.body()
        try:
            source = raw.decode("utf-8")
        except UnicodeDecodeError:
            return _error(400, "body must be UTF-8 text")
        try:
            version = await run_in_threadpool(kb_store.put, name, source)
        except ParseError as exc:
            return _json_response(payloads.parse_error_payload(exc), 422)
        return _json_response({"version": version})

    @app.get("/kb/{name}")
    async def get_kb(name: str) -> Response:
        slot = slot_or_none(name)
        if slot is None:
            return _error(404, f"unknown knowledge base {name!r}")
        return _json_response(payloads.kb_summary_payload(slot.source, slot.kb))

    @app.post("/kb/{name}/recommend")
    async def recommend_kb(name: str, request: Request) -> Response:
        slot = slot_or_none(name)
        if slot is None:
            return _error(404, f"unknown knowledge base {name!r}")
        try:
            body = await _read_json_body(request)
            requirements = _requirements_from_body(slot.kb, body)
            n = _positive_int(body, "n", DEFAULT_N_DIAGNOSES)
            item = body.get("item")
            if item is not None and not isinstance(item, str):
                raise _BadRequest("item must be a product name")
            if item is not None:
                result = await run_in_threadpool(
                    recommend_for_item,
                    slot.kb,
                    requirements,
                    item,
                    DEFAULT_MAX_ALTERNATIVES,
                )
            else:
                result = await run_in_threadpool(
                    recommend, slot.kb, requirements, n
                )
        except _BadRequest as exc:
            return _error(400, exc.message)
        except ModelError as exc:
            return _error(400, str(exc))
        return _json_response(payloads.recommendation_payload(result, requirements))

    @app.post("/kb/{name}/tests/run")
    async def run_kb_tests(name: str) -> Response:
        slot = slot_or_none(name)
        if slot is None:
            return _error(404, f"unknown knowledge base {name!r}")
        results = await run_in_threadpool(run_tests, slot.kb)
        return _json_response(payloads.test_run_payload(results))

    @app.post("/kb/{name}/diagnose")
    async def diagnose_kb_endpoint(name: str, request: Request) -> Response:
        slot = slot_or_none(name)
        if slot is None:
            return _error(404, f"unknown knowledge base {name!r}")
        try:
            body = await _read_json_body(request)
            ordering = body.get("ordering", ORDERINGS[0])
            if ordering not in ORDERINGS:
                raise _BadRequest(
                    f"ordering must be one of {', '.join(ORDERINGS)}"
                )
            n = _positive_int(body, "n", DEFAULT_N_DIAGNOSES)
            result = await run_in_threadpool(diagnose_kb, slot.kb, ordering, n)
        except _BadRequest as exc:
            return _error(400, exc.message)
        except UnrepairableError as exc:
            return _error(409, str(exc))
        return _json_response(payloads.kb_diagnosis_payload(slot.kb, result))

    return app
