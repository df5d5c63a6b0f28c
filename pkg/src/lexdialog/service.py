"""HTTP facade over dialogue sessions.

Routes: POST /sessions, DELETE /sessions/{id}, POST /sessions/{id}/command,
GET /sessions/{id}/transcript, GET /health, plus convenience endpoints that
desugar to dialogue commands (POST .../laws, .../cases, .../queries/implies)
so every interface shares one semantics.

Environment: LEXDIALOG_ADDR (host:port), LEXDIALOG_BUDGET (search budget),
LEXDIALOG_SESSION_TTL_SECS (idle eviction, default 1800). Commands within a
session run strictly one at a time; evicting or deleting a session cancels
any query it still has running.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from pydantic import BaseModel

from .engine import EngineConfig
from .session import Reply, Session, execute, transcript

DEFAULT_TTL_SECS = 1800.0

_STATUS_BY_CODE = {
    "unknown_name": 404,
    "unknown_session": 404,
    "layer_mismatch": 422,
    "signature_mismatch": 422,
    "resource_limit": 429,
}


def _http_status(reply: Reply) -> int:
    if not reply.is_error:
        return 200
    return _STATUS_BY_CODE.get(reply.error_code or "", 400)


@dataclass
class _Stored:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)
    cancel: threading.Event = field(default_factory=threading.Event)
    last_active: float = 0.0


class SessionStore:
    """Thread-safe session registry with idle-timeout eviction."""

    def __init__(self, ttl_secs: float, budget: Optional[int],
                 clock: Callable[[], float] = time.monotonic):
        self.ttl = ttl_secs
        self.budget = budget
        self.clock = clock
        self._lock = threading.Lock()
        self._store: dict[str, _Stored] = {}

    def _config(self, cancel: threading.Event) -> EngineConfig:
        kwargs = {"cancel": cancel.is_set}
        if self.budget is not None:
            kwargs.update(candidate_budget=self.budget,
                          state_budget=self.budget)
        return EngineConfig(**kwargs)

    def sweep(self) -> None:
        now = self.clock()
        with self._lock:
            expired = [sid for sid, st in self._store.items()
                       if now - st.last_active > self.ttl]
            for sid in expired:
                self._store[sid].cancel.set()
                del self._store[sid]

    def create(self) -> str:
        self.sweep()
        sid = secrets.token_urlsafe(16)
        stored = _Stored(session=Session(), last_active=self.clock())
        stored.session = Session(config=self._config(stored.cancel))
        with self._lock:
            self._store[sid] = stored
        return sid

    def get(self, sid: str) -> Optional[_Stored]:
        self.sweep()
        with self._lock:
            stored = self._store.get(sid)
            if stored is not None:
                stored.last_active = self.clock()
            return stored

    def delete(self, sid: str) -> bool:
        with self._lock:
            stored = self._store.pop(sid, None)
        if stored is None:
            return False
        stored.cancel.set()
        return True

    def run(self, stored: _Stored, command: str) -> Reply:
        with stored.lock:
            session, reply = execute(stored.session, command)
            stored.session = session
            stored.last_active = self.clock()
            return reply


class CommandBody(BaseModel):
    command: str


class LawBody(BaseModel):
    name: str
    sig: str
    text: str


class CaseBody(BaseModel):
    name: str
    sig: str
    data: dict


class ImpliesBody(BaseModel):
    law: str
    property: str
    bound: Optional[int] = None


def create_app(ttl_secs: Optional[float] = None, budget: Optional[int] = None,
               clock: Callable[[], float] = time.monotonic) -> FastAPI:
    if ttl_secs is None:
        ttl_secs = float(os.environ.get("LEXDIALOG_SESSION_TTL_SECS",
                                        DEFAULT_TTL_SECS))
    if budget is None:
        raw = os.environ.get("LEXDIALOG_BUDGET")
        budget = int(raw) if raw else None

    store = SessionStore(ttl_secs, budget, clock)
    app = FastAPI(title="lexdialog", docs_url=None, redoc_url=None)
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request, exc) -> JSONResponse:
        # malformed bodies are 400; 422 stays reserved for layer mismatches
        reply = Reply("error", {"code": "malformed_body", "message": str(exc)},
                      "error[malformed_body]: request body does not fit the route")
        return JSONResponse(reply.to_json(), status_code=400)

    def _missing_session() -> JSONResponse:
        reply = Reply("error", {"code": "unknown_session",
                                "message": "no such session"},
                      "error[unknown_session]: no such session")
        return JSONResponse(reply.to_json(), status_code=404)

    def _reply_response(reply: Reply) -> JSONResponse:
        return JSONResponse(reply.to_json(), status_code=_http_status(reply))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session() -> dict:
        return {"session": store.create()}

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str) -> Response:
        if not store.delete(sid):
            return _missing_session()
        return Response(status_code=204)

    @app.post("/sessions/{sid}/command")
    def run_command(sid: str, body: CommandBody) -> JSONResponse:
        stored = store.get(sid)
        if stored is None:
            return _missing_session()
        return _reply_response(store.run(stored, body.command))

    @app.get("/sessions/{sid}/transcript")
    def get_transcript(sid: str) -> PlainTextResponse:
        stored = store.get(sid)
        if stored is None:
            return PlainTextResponse("no such session\n", status_code=404)
        with stored.lock:
            text = transcript(stored.session)
        return PlainTextResponse(text)

    @app.post("/sessions/{sid}/laws")
    def add_law(sid: str, body: LawBody) -> JSONResponse:
        stored = store.get(sid)
        if stored is None:
            return _missing_session()
        command = f"deflaw {body.name} sig={body.sig} := {body.text}"
        return _reply_response(store.run(stored, command))

    @app.post("/sessions/{sid}/cases")
    def add_case(sid: str, body: CaseBody) -> JSONResponse:
        stored = store.get(sid)
        if stored is None:
            return _missing_session()
        data = json.dumps(body.data, separators=(",", ":"))
        command = f"defcase {body.name} sig={body.sig} := {data}"
        return _reply_response(store.run(stored, command))

    @app.post("/sessions/{sid}/queries/implies")
    def query_implies(sid: str, body: ImpliesBody) -> JSONResponse:
        stored = store.get(sid)
        if stored is None:
            return _missing_session()
        command = f"implies {body.law} {body.property}"
        if body.bound is not None:
            command += f" bound {body.bound}"
        return _reply_response(store.run(stored, command))

    return app


def serve(addr: Optional[str] = None) -> None:
    """Run the service with uvicorn; binds loopback unless told otherwise."""
    import uvicorn

    addr = addr or os.environ.get("LEXDIALOG_ADDR", "127.0.0.1:8601")
    host, _, port = addr.rpartition(":")
    uvicorn.run(create_app(), host=host or "127.0.0.1", port=int(port))


app = create_app()
