"""Blind-rating sessions: seeded shuffles, judgment recording, scoring, and
append-only event-log persistence."""
from __future__ import annotations

import json
import secrets
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

REAL, SYNTH, SKIP = "REAL", "SYNTH", "SKIP"
LOG_VERSION = 1


class SessionError(ValueError):
    pass


@dataclass
class SessionItem:
    item_id: str
    source: str     # REAL | SYNTH; never serialized to clients before close
    image_ref: str


@dataclass
class RatingSession:
    session_id: str
    rater_id: str
    seed: int
    items: list[SessionItem]
    ratings: dict[str, dict] = field(default_factory=dict)  # item_id -> record
    closed: bool = False

    @property
    def cursor(self) -> int:
        return len(self.ratings)

    def next_item(self) -> SessionItem | None:
        """First item without a recorded judgment, or None when exhausted."""
        for item in self.items:
            if item.item_id not in self.ratings:
                return item
        return None

    def client_view(self, item: SessionItem) -> dict:
        """Blinded item payload: no source field before close."""
        return {"item_id": item.item_id, "image_ref": item.image_ref,
                "rated": self.cursor, "total": len(self.items)}


@dataclass
class ConfusionMatrix2x2:
    """Counts over (truth REAL/SYNTH) x (judged REAL/SYNTH), skips excluded."""

    rater_id: str
    real_judged_real: int = 0
    real_judged_synth: int = 0
    synth_judged_real: int = 0
    synth_judged_synth: int = 0
    skipped: int = 0
    unrated: int = 0

    @property
    def total(self) -> int:
        return (self.real_judged_real + self.real_judged_synth
                + self.synth_judged_real + self.synth_judged_synth)

    @property
    def accuracy(self) -> float:
        if self.total == 0:
            return 0.0
        return (self.real_judged_real + self.synth_judged_synth) / self.total

    def to_dict(self) -> dict:
        return {"rater_id": self.rater_id,
                "matrix": {"real_judged_real": self.real_judged_real,
                           "real_judged_synth": self.real_judged_synth,
                           "synth_judged_real": self.synth_judged_real,
                           "synth_judged_synth": self.synth_judged_synth},
                "skipped": self.skipped, "unrated": self.unrated,
                "total_rated": self.total, "accuracy": self.accuracy}


def create_session(real_refs: list[str], synth_refs: list[str], rater_id: str,
                   seed: int, session_id: str | None = None) -> RatingSession:
    """Interleave both sets in a seeded random order; ground truth stays
    server-side only."""
    if not real_refs or not synth_refs:
        raise SessionError("both real and synthetic reference sets must be non-empty")
    items = ([SessionItem(f"r{i}", REAL, ref) for i, ref in enumerate(real_refs)]
             + [SessionItem(f"s{i}", SYNTH, ref) for i, ref in enumerate(synth_refs)])
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(items))
    items = [items[i] for i in order]
    sid = session_id if session_id is not None else secrets.token_hex(8)
    return RatingSession(sid, rater_id, seed, items)


def record_rating(session: RatingSession, item_id: str, judgment: str,
                  timestamp: float | None = None) -> dict:
    """Persist one judgment; duplicates and closed sessions are rejected
    without state change."""
    if session.closed:
        raise SessionError("session is closed")
    if judgment not in (REAL, SYNTH, SKIP):
        raise SessionError(f"judgment must be REAL, SYNTH, or SKIP, got {judgment!r}")
    if not any(it.item_id == item_id for it in session.items):
        raise SessionError(f"unknown item {item_id!r}")
    if item_id in session.ratings:
        raise SessionError(f"item {item_id!r} already rated")
    record = {"judgment": judgment,
              "timestamp": timestamp if timestamp is not None else time.time(),
              "rater_id": session.rater_id}
    session.ratings[item_id] = record
    return record


def close_and_score(session: RatingSession) -> ConfusionMatrix2x2:
    """Seal the session and tally the confusion matrix over rated items."""
    judged = {k: v for k, v in session.ratings.items() if v["judgment"] != SKIP}
    if not judged:
        raise SessionError("cannot close a session with zero non-skip ratings")
    session.closed = True
    matrix = ConfusionMatrix2x2(session.rater_id)
    for item in session.items:
        rec = session.ratings.get(item.item_id)
        if rec is None:
            matrix.unrated += 1
        elif rec["judgment"] == SKIP:
            matrix.skipped += 1
        elif item.source == REAL:
            if rec["judgment"] == REAL:
                matrix.real_judged_real += 1
            else:
                matrix.real_judged_synth += 1
        else:
            if rec["judgment"] == REAL:
                matrix.synth_judged_real += 1
            else:
                matrix.synth_judged_synth += 1
    return matrix


class SessionStore:
    """Append-only JSON-lines event logs, one file per session. Replaying a
    log reproduces the session state and confusion matrix exactly."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.jsonl"

    def _append(self, session_id: str, event: dict) -> None:
        with open(self._path(session_id), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event) + "\n")

    def log_create(self, session: RatingSession) -> None:
        self._append(session.session_id, {
            "version": LOG_VERSION, "event": "create",
            "session_id": session.session_id, "rater_id": session.rater_id,
            "seed": session.seed,
            "items": [{"item_id": it.item_id, "source": it.source,
                       "image_ref": it.image_ref} for it in session.items]})

    def log_rating(self, session_id: str, item_id: str, record: dict) -> None:
        self._append(session_id, {"event": "rate", "item_id": item_id, **record})

    def log_close(self, session_id: str) -> None:
        self._append(session_id, {"event": "close"})

    def replay(self, session_id: str) -> RatingSession:
        """Rebuild a session purely from its event log."""
        path = self._path(session_id)
        if not path.exists():
            raise SessionError(f"no event log for session {session_id!r}")
        session = None
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                event = json.loads(line)
                kind = event["event"]
                if kind == "create":
                    items = [SessionItem(it["item_id"], it["source"], it["image_ref"])
                             for it in event["items"]]
                    session = RatingSession(event["session_id"], event["rater_id"],
                                            event["seed"], items)
                elif kind == "rate":
                    session.ratings[event["item_id"]] = {
                        "judgment": event["judgment"],
                        "timestamp": event["timestamp"],
                        "rater_id": event["rater_id"]}
                elif kind == "close":
                    session.closed = True
        if session is None:
            raise SessionError(f"event log for {session_id!r} has no create event")
        return session
