"""HTTP JSON API for blind rating sessions."""
from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from pydantic import BaseModel, Field

from .session import (RatingSession, SessionError, SessionStore, close_and_score,
                      create_session, record_rating)


class CreateSessionRequest(BaseModel):
    real_refs: list[str]
    synth_refs: list[str]
    rater_id: str
    seed: int = 0


class RatingRequest(BaseModel):
    item_id: str
    judgment: str = Field(pattern="^(REAL|SYNTH|SKIP)$")


def build_app(store_dir: str | Path = "turing_sessions") -> FastAPI:
    app = FastAPI(title="histosynth blind rating service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    store = SessionStore(store_dir)
    sessions: dict[str, RatingSession] = {}
    app.state.store = store
    app.state.sessions = sessions

    def _get(session_id: str) -> RatingSession:
        session = sessions.get(session_id)
        if session is None:
            try:
                session = store.replay(session_id)
            except SessionError:
                raise HTTPException(404, f"unknown session {session_id}")
            sessions[session_id] = session
        return session

    @app.post("/sessions")
    def create(req: CreateSessionRequest):
        try:
            session = create_session(req.real_refs, req.synth_refs,
                                     req.rater_id, req.seed)
        except SessionError as exc:
            raise HTTPException(422, str(exc))
        sessions[session.session_id] = session
        store.log_create(session)
        return {"session_id": session.session_id, "total": len(session.items)}

    @app.get("/sessions/{session_id}/next")
    def next_item(session_id: str):
        session = _get(session_id)
        if session.closed:
            raise HTTPException(409, "session is closed")
        item = session.next_item()
        if item is None:
            return {"done": True, "rated": session.cursor,
                    "total": len(session.items)}
        payload = session.client_view(item)
        payload["image_url"] = f"/sessions/{session_id}/items/{item.item_id}/image"
        payload["done"] = False
        return payload

    @app.post("/sessions/{session_id}/ratings")
    def rate(session_id: str, req: RatingRequest):
        session = _get(session_id)
        try:
            record = record_rating(session, req.item_id, req.judgment)
        except SessionError as exc:
            raise HTTPException(409, str(exc))
        store.log_rating(session_id, req.item_id, record)
        return {"ok": True, "rated": session.cursor, "total": len(session.items)}

    @app.post("/sessions/{session_id}/close")
    def close(session_id: str):
        session = _get(session_id)
        if session.closed:
            raise HTTPException(409, "session already closed")
        try:
            matrix = close_and_score(session)
        except SessionError as exc:
            raise HTTPException(409, str(exc))
        store.log_close(session_id)
        return matrix.to_dict()

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str):
        session = _get(session_id)
        if not session.closed:
            raise HTTPException(409, "session not closed yet")
        # recompute from state; closed flag keeps close_and_score idempotent here
        session.closed = False
        try:
            matrix = close_and_score(session)
        finally:
            session.closed = True
        return matrix.to_dict()

    @app.get("/sessions/{session_id}/items/{item_id}/image")
    def item_image(session_id: str, item_id: str):
        session = _get(session_id)
        for item in session.items:
            if item.item_id == item_id:
                path = Path(item.image_ref)
                if not path.exists():
                    raise HTTPException(404, "image file missing")
                return FileResponse(path)
        raise HTTPException(404, f"unknown item {item_id}")

    return app
