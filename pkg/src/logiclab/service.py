"""HTTP/JSON API over a SessionStore.

Paths are fixed: exercises listing and generation, session lifecycle,
command application, undo, replay, and document export. Command failures
are not HTTP errors; they come back as rejected events, part of the
session's movie.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .errors import (
    CorruptLog,
    LogicError,
    NoSuchExercise,
    NoSuchSession,
    ProofIncomplete,
    SessionClosed,
)
from .generator import GeneratorConfig, generate
from .sessions import SessionStore, session_state_json

_STATUS = {
    NoSuchExercise: 404,
    NoSuchSession: 404,
    SessionClosed: 409,
    ProofIncomplete: 409,
    CorruptLog: 500,
}


def create_app(store: SessionStore) -> FastAPI:
    app = FastAPI(title="logiclab", version="0.1.0")
    # the browser UI is served as static files from elsewhere
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(LogicError)
    async def on_logic_error(_: Request, exc: LogicError):
        status = next(
            (code for cls, code in _STATUS.items() if isinstance(exc, cls)), 400
        )
        return JSONResponse(
            status_code=status, content={"error": exc.code, "message": str(exc)}
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/exercises")
    def exercises():
        return {"exercises": [e.to_student_json() for e in store.exercises()]}

    @app.post("/exercises/generate")
    def generate_exercise(config: dict):
        spec = generate(GeneratorConfig.from_json(config))
        store.add_exercises([spec], pack_name=spec.id)
        return spec.to_instructor_json()

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        session = store.create_session(body["exercise_id"], body.get("student_id", "anon"))
        return {
            **session.to_json(),
            "state": session_state_json(store, session),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = store.get_session(session_id)
        return {
            **session.to_json(),
            "state": session_state_json(store, session),
        }

    @app.post("/sessions/{session_id}/commands")
    def post_command(session_id: str, body: dict):
        event = store.apply_command(session_id, body.get("command", ""))
        session = store.get_session(session_id)
        return {
            **event.to_json(),
            "state": session_state_json(store, session),
        }

    @app.post("/sessions/{session_id}/undo")
    def post_undo(session_id: str):
        event = store.undo(session_id)
        session = store.get_session(session_id)
        return {
            **event.to_json(),
            "state": session_state_json(store, session),
        }

    @app.get("/sessions/{session_id}/replay")
    def get_replay(session_id: str):
        return store.replay(session_id).to_json()

    @app.get("/sessions/{session_id}/export")
    def get_export(session_id: str, form: str = "script"):
        document = store.export(session_id, form)
        if form == "script":
            return PlainTextResponse(document)
        return document

    return app
