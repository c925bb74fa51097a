"""Event-sourced sessions: append-only logs, undo, and movie replay.

One JSONL file per session: a header line followed by one line per
event, accepted or rejected alike. Nothing else is authoritative: status
and the current proof state are always recomputable by replaying the
accepted events against the exercise, and replay doubles as an
integrity check on the stored log.
"""
from __future__ import annotations

import datetime as _dt
import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .checker import check_tree
from .errors import (
    CorruptLog,
    LogicError,
    NoSuchExercise,
    NoSuchSession,
    ProofIncomplete,
    SessionClosed,
)
from .exercises import ExerciseSpec, exercise_from_json, pack_loads
from .kernel import ProofState, goal_to_json, list_applicable, state_digest, state_to_json
from .tactics import ScriptRunner, StepReport, parse_command
from .tree import extract_tree, tree_to_json, tree_to_text


@dataclass(frozen=True)
class Event:
    ordinal: int
    timestamp: str
    command: str
    accepted: bool
    report: Optional[dict] = None  # accepted: StepReport JSON
    error: Optional[str] = None  # rejected: error code
    message: str = ""

    def to_json(self) -> dict:
        out = {
            "ordinal": self.ordinal,
            "timestamp": self.timestamp,
            "command": self.command,
            "outcome": {"accepted": self.accepted},
        }
        if self.accepted:
            out["outcome"]["report"] = self.report
        else:
            out["outcome"]["error"] = self.error
            out["outcome"]["message"] = self.message
        return out

    @staticmethod
    def from_json(data: dict) -> "Event":
        outcome = data["outcome"]
        return Event(
            ordinal=data["ordinal"],
            timestamp=data["timestamp"],
            command=data["command"],
            accepted=outcome["accepted"],
            report=outcome.get("report"),
            error=outcome.get("error"),
            message=outcome.get("message", ""),
        )


@dataclass
class Session:
    id: str
    exercise_id: str
    student_id: str
    created: str
    events: list[Event] = field(default_factory=list)
    runner: Optional[ScriptRunner] = None

    @property
    def status(self) -> str:
        return self.runner.status if self.runner else "open"

    def to_json(self, include_events: bool = True) -> dict:
        out = {
            "id": self.id,
            "exercise_id": self.exercise_id,
            "student_id": self.student_id,
            "created": self.created,
            "status": self.status,
        }
        if include_events:
            out["events"] = [e.to_json() for e in self.events]
        return out


@dataclass(frozen=True)
class ReplayLog:
    frames: tuple[ProofState, ...]
    digests: tuple[str, ...]
    events: tuple[Event, ...]
    event_frames: tuple[int, ...]  # frame index current after each event

    def to_json(self) -> dict:
        return {
            "frames": [
                {**state_to_json(f), "digest": d}
                for f, d in zip(self.frames, self.digests)
            ],
            "events": [
                {**e.to_json(), "frame_after": idx}
                for e, idx in zip(self.events, self.event_frames)
            ],
        }


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="milliseconds")


def _new_runner(exercise: ExerciseSpec) -> ScriptRunner:
    return ScriptRunner(
        exercise.sequent,
        exercise.signature,
        exercise.definitions,
        exercise.automation_cap,
    )


class SessionStore:
    """Exercises and sessions under one data directory.

    Commands within a session are serialized by a per-session lock;
    distinct sessions proceed independently.
    """

    def __init__(self, data_dir: Path | str):
        self.data_dir = Path(data_dir)
        self.exercise_dir = self.data_dir / "exercises"
        self.session_dir = self.data_dir / "sessions"
        self.exercise_dir.mkdir(parents=True, exist_ok=True)
        self.session_dir.mkdir(parents=True, exist_ok=True)
        self._exercises: dict[str, ExerciseSpec] = {}
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()
        self._load_exercises()

    # ---- exercises

    def _load_exercises(self):
        for path in sorted(self.exercise_dir.glob("*.json")):
            for exercise in pack_loads(path.read_text()):
                self._exercises[exercise.id] = exercise

    def add_exercises(self, exercises, pack_name: str = "pack"):
        from .exercises import pack_dumps

        path = self.exercise_dir / f"{pack_name}.json"
        path.write_text(pack_dumps(list(exercises), "instructor"))
        for exercise in exercises:
            self._exercises[exercise.id] = exercise

    def exercises(self) -> list[ExerciseSpec]:
        return [self._exercises[k] for k in sorted(self._exercises)]

    def exercise(self, exercise_id: str) -> ExerciseSpec:
        if exercise_id not in self._exercises:
            raise NoSuchExercise(exercise_id)
        return self._exercises[exercise_id]

    # ---- session plumbing

    def _lock(self, session_id: str) -> threading.Lock:
        with self._store_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _session_path(self, session_id: str) -> Path:
        return self.session_dir / f"{session_id}.jsonl"

    def _append(self, session: Session, payload: dict):
        line = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
        with self._session_path(session.id).open("a", encoding="utf-8") as fh:
            fh.write(line)
            fh.flush()

    def _get(self, session_id: str) -> Session:
        if session_id in self._sessions:
            return self._sessions[session_id]
        path = self._session_path(session_id)
        if not path.exists():
            raise NoSuchSession(session_id)
        session = self._load_session(path)
        self._sessions[session_id] = session
        return session

    def _load_session(self, path: Path) -> Session:
        lines = path.read_text().splitlines()
        if not lines:
            raise CorruptLog(0, "empty session file")
        header = json.loads(lines[0])
        session = Session(
            id=header["id"],
            exercise_id=header["exercise_id"],
            student_id=header["student_id"],
            created=header["created"],
        )
        exercise = self.exercise(session.exercise_id)
        session.runner = _new_runner(exercise)
        for i, line in enumerate(lines[1:]):
            event = Event.from_json(json.loads(line))
            if event.ordinal != i:
                raise CorruptLog(i, f"expected ordinal {i}, found {event.ordinal}")
            session.events.append(event)
            if event.accepted:
                try:
                    session.runner.run_text(event.command)
                except LogicError as exc:
                    raise CorruptLog(event.ordinal, f"accepted event no longer replays: {exc}")
        return session

    # ---- operations

    def create_session(self, exercise_id: str, student_id: str) -> Session:
        exercise = self.exercise(exercise_id)  # NoSuchExercise on unknown ids
        session = Session(
            id=f"s-{uuid.uuid4().hex[:12]}",
            exercise_id=exercise_id,
            student_id=student_id,
            created=_now(),
        )
        session.runner = _new_runner(exercise)
        self._append(
            session,
            {
                "type": "session",
                "id": session.id,
                "exercise_id": exercise_id,
                "student_id": student_id,
                "created": session.created,
            },
        )
        self._sessions[session.id] = session
        return session

    def apply_command(self, session_id: str, command_text: str) -> Event:
        with self._lock(session_id):
            session = self._get(session_id)
            if session.status != "open":
                raise SessionClosed(f"session is {session.status}")
            ordinal = len(session.events)
            try:
                report = session.runner.run_text(command_text)
                event = Event(
                    ordinal=ordinal,
                    timestamp=_now(),
                    command=command_text.strip(),
                    accepted=True,
                    report=report.to_json(),
                )
            except LogicError as exc:
                event = Event(
                    ordinal=ordinal,
                    timestamp=_now(),
                    command=command_text.strip(),
                    accepted=False,
                    error=exc.code,
                    message=str(exc),
                )
            session.events.append(event)
            self._append(session, event.to_json())
            return event

    def undo(self, session_id: str) -> Event:
        event = self.apply_command(session_id, "undo")
        if not event.accepted:
            # surface NothingToUndo as an error, per the operation contract;
            # the rejected attempt stays in the movie
            from . import errors

            exc_cls = getattr(errors, event.error, LogicError)
            raise exc_cls(event.message)
        return event

    def replay(self, session_id: str) -> ReplayLog:
        with self._lock(session_id):
            session = self._get(session_id)
            exercise = self.exercise(session.exercise_id)
            runner = _new_runner(exercise)
            frames = [runner.state]
            event_frames: list[int] = []
            for event in session.events:
                if event.accepted:
                    try:
                        report = runner.run_text(event.command)
                    except LogicError as exc:
                        raise CorruptLog(
                            event.ordinal, f"accepted event no longer replays: {exc}"
                        )
                    if report.frame_changed:
                        frames.append(runner.state)
                event_frames.append(len(frames) - 1)
            live = session.runner.state
            if state_digest(live) != state_digest(runner.state):
                raise CorruptLog(len(session.events), "replayed state differs from live state")
            return ReplayLog(
                frames=tuple(frames),
                digests=tuple(state_digest(f) for f in frames),
                events=tuple(session.events),
                event_frames=tuple(event_frames),
            )

    def export(self, session_id: str, form: str):
        session = self._get(session_id)
        exercise = self.exercise(session.exercise_id)
        if form == "script":
            lines = [e.command for e in session.events if e.accepted]
            return "\n".join(lines) + ("\n" if lines else "")
        if form == "tree":
            if session.status != "proved":
                raise ProofIncomplete(
                    session.runner.state.open_goals,
                    detail="tree export requires a proved session",
                )
            tree = extract_tree(session.runner.state)
            verdict = check_tree(tree, exercise.sequent, exercise.definitions)
            if not verdict.ok:  # pragma: no cover - kernel/checker disagreement
                raise CorruptLog(len(session.events), f"extracted tree fails audit: {verdict.reason}")
            return {"json": tree_to_json(tree), "text": tree_to_text(tree)}
        if form == "movie":
            log = self.replay(session_id)
            return {
                "session": session.to_json(include_events=False),
                **log.to_json(),
            }
        raise LogicError(f"unknown export form {form!r}")

    def get_session(self, session_id: str) -> Session:
        with self._lock(session_id):
            return self._get(session_id)

    def sessions(self) -> list[str]:
        ids = {p.stem for p in self.session_dir.glob("*.jsonl")}
        ids.update(self._sessions)
        return sorted(ids)


# ---------------------------------------------------------------- projections


def session_state_json(store: SessionStore, session: Session) -> dict:
    """Current goals plus the rule palette the UI renders."""
    state = session.runner.state
    goals = []
    for gid in state.open_goals:
        entry = goal_to_json(state.goals[gid])
        entry["palette"] = [dict(s) for s in list_applicable(state, gid)]
        goals.append(entry)
    return {
        "status": session.status,
        "open_goals": goals,
        "digest": state_digest(state),
    }
