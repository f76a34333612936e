"""HTTP API over the session store.

Endpoints (all JSON):
    POST /sessions                      {recording_path, config?} -> {session_id}
    POST /sessions/{id}/analyze         202 {state}; runs the pipeline in-process
    GET  /sessions/{id}                 full record (never image bytes)
    GET  /sessions/{id}/actions         trace actions
    POST /sessions/{id}/suggestions/next  one suggestion or {exhausted: true}
    GET  /sessions/{id}/suggestions     revealed items only
Error bodies are {code, message}.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .errors import (
    InvalidInputError,
    SessionNotFoundError,
    SessionStateError,
)
from .providers import ChatProvider
from .store import SessionStore, config_from_dict


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(store: SessionStore, provider: ChatProvider) -> FastAPI:
    app = FastAPI(title="screenadvisor")

    @app.exception_handler(SessionNotFoundError)
    async def _not_found(request: Request, exc: SessionNotFoundError):
        return _error(404, "session_not_found", str(exc))

    @app.exception_handler(SessionStateError)
    async def _conflict(request: Request, exc: SessionStateError):
        return _error(409, "invalid_state", str(exc))

    @app.exception_handler(InvalidInputError)
    async def _bad_request(request: Request, exc: InvalidInputError):
        return _error(400, "invalid_input", str(exc))

    @app.post("/sessions")
    async def create_session(request: Request):
        body = await request.json()
        recording_path = body.get("recording_path")
        if not recording_path:
            return _error(400, "invalid_input", "recording_path is required")
        config = config_from_dict(body.get("config") or {})
        record = store.create_session(recording_path, config)
        return {"session_id": record.session_id}

    @app.post("/sessions/{session_id}/analyze", status_code=202)
    def analyze(session_id: str):
        record = store.start_pipeline(session_id)
        worker = threading.Thread(
            target=store.continue_pipeline, args=(record, provider), daemon=True
        )
        worker.start()
        return {"state": record.state}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return store.load_record(session_id).to_dict()

    @app.get("/sessions/{session_id}/actions")
    def get_actions(session_id: str):
        store.load_record(session_id)
        trace = store.load_trace(session_id)
        return {
            "actions": [
                {"text": a.text, "segment": a.segment_index, "batch": a.batch_index}
                for a in trace.actions
            ]
        }

    @app.post("/sessions/{session_id}/suggestions/next")
    def next_suggestion(session_id: str):
        item = store.reveal_next(session_id)
        if item is None:
            return {"exhausted": True}
        return {"exhausted": False, "suggestion": item.to_dict()}

    @app.get("/sessions/{session_id}/suggestions")
    def revealed_suggestions(session_id: str):
        record = store.load_record(session_id)
        if record.state != "ready":
            raise SessionStateError(
                f"session {session_id} is in state '{record.state}', expected 'ready'"
            )
        return {"items": [a.to_dict() for a in store.revealed_items(session_id)]}

    return app
