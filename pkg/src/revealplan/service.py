"""Session-oriented HTTP API for live games with a human follower.

Each session runs one game: the server computes the leader's action each
round from the configured planner, the human submits a column, and the
leader's knowledge advances only through observations its model makes
legal. Under M2 the human is additionally asked, after each revealing
row, whether she now knows that row's true payoffs, mirroring the
round-by-round query protocol of the original experiment.

Sessions persist in an embedded sqlite store so a restarted service
resumes live games. Requests for one session are serialized; planner
tables are immutable and shared.
"""

from __future__ import annotations

import io
import csv
import json
import sqlite3
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .belief_solver import Cell, observe_belief, solve_belief, solve_complete
from .full_solver import FullObsState, solve_full
from .game import CapacityError, GameSpec, SpecError, row_stats, spec_from_dict, spec_to_dict
from .presets import OUTCOME_NOTES, PRESETS

PHASE_HUMAN = "AwaitingHuman"
PHASE_DECLARE = "AwaitingLearnedDeclaration"
PHASE_FINISHED = "Finished"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, phase: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.phase = phase


class CreateSession(BaseModel):
    preset: str | None = None
    spec: dict | None = None
    planner: str = "partial"
    reveal_mode: str = "outcome_only"
    model: str | None = None
    alpha: float | None = None
    horizon: int | None = None


class HumanAction(BaseModel):
    column: int


class LearnedDeclaration(BaseModel):
    learned: bool


class SessionStore:
    """sqlite-backed key-value store of session state dicts."""

    def __init__(self, db_path: str | None = None):
        self._conn = sqlite3.connect(db_path or ":memory:", check_same_thread=False)
        self._conn.execute("CREATE TABLE IF NOT EXISTS sessions (id TEXT PRIMARY KEY, data TEXT)")
        self._conn.commit()
        self._db_lock = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._db_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def save(self, state: dict) -> None:
        with self._db_lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO sessions (id, data) VALUES (?, ?)",
                (state["id"], json.dumps(state)),
            )
            self._conn.commit()

    def load(self, session_id: str) -> dict:
        with self._db_lock:
            row = self._conn.execute(
                "SELECT data FROM sessions WHERE id = ?", (session_id,)
            ).fetchone()
        if row is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")
        return json.loads(row[0])


_plan_cache: dict = {}
_plan_cache_lock = threading.Lock()


def _plan_for(spec: GameSpec, planner: str):
    observability = "partial" if spec.model == "M3" else "full"
    key = (spec, planner, observability)
    with _plan_cache_lock:
        if key not in _plan_cache:
            if planner == "complete":
                _plan_cache[key] = solve_complete(spec, observability)
            elif spec.model == "M3":
                _plan_cache[key] = solve_belief(spec)
            else:
                _plan_cache[key] = solve_full(spec)
        return _plan_cache[key]


def _leader_action(state: dict, spec: GameSpec) -> int:
    plan = _plan_for(spec, state["planner"])
    t = state["round"]
    if spec.model == "M3":
        if state["planner"] == "complete":
            return plan.action_at(t, state["leader_cell"])
        return plan.action_at(t, state["leader_belief"])
    return plan.action_rule(FullObsState(tuple(state["leader_revealed"]), t))


def _advance_observation(state: dict, spec: GameSpec, row: int, reward: float) -> None:
    best_seen = reward == row_stats(spec).best_value[row]
    if spec.model == "M3":
        if state["planner"] == "complete":
            cell = state["leader_cell"]
            if spec.revealing[row] and cell != int(Cell.LEARNED):
                if cell == int(Cell.UNPLAYED):
                    cell = int(Cell.UNCERTAIN)
                elif best_seen:
                    cell = int(Cell.LEARNED)
            state["leader_cell"] = cell
        else:
            state["leader_belief"] = [
                int(c) for c in observe_belief(spec, state["leader_belief"], row, best_seen)
            ]
    elif spec.model == "M1":
        if best_seen:
            state["leader_revealed"][row] = True
    # M2 waits for the learned declaration.


def _session_view(state: dict, spec: GameSpec) -> dict:
    view = {
        "id": state["id"],
        "phase": state["phase"],
        "round": state["round"],
        "horizon": spec.horizon,
        "model": spec.model,
        "planner": state["planner"],
        "reveal_mode": state["reveal_mode"],
        "row_labels": list(spec.row_labels),
        "column_labels": list(spec.column_labels),
        "cumulative_reward": state["cumulative"],
        "history": state["transcript"],
        "leader_action": None,
        "revealed_rows": {},
    }
    if state["phase"] != PHASE_FINISHED:
        row = _leader_action(state, spec)
        view["leader_action"] = {"index": row, "label": spec.row_labels[row]}
    if state["reveal_mode"] == "row_on_play":
        played = {e["row"] for e in state["transcript"]}
        if view["leader_action"] is not None:
            played.add(view["leader_action"]["index"])
        view["revealed_rows"] = {str(r): list(spec.rewards[r]) for r in sorted(played)}
    return view


def _outcome_note(state: dict, row: int, column: int) -> str | None:
    notes = OUTCOME_NOTES.get(state.get("preset") or "", {})
    return notes.get((row, column))


def create_app(db_path: str | None = None, frontend_dir: str | None = "frontend/dist") -> FastAPI:
    app = FastAPI(title="revealplan session service")
    store = SessionStore(db_path)

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "phase": exc.phase},
        )

    def _resolve_spec(body: CreateSession) -> GameSpec:
        if (body.preset is None) == (body.spec is None):
            raise ApiError(400, "invalid_spec", "exactly one of preset or spec is required")
        if body.preset is not None:
            if body.preset not in PRESETS:
                raise ApiError(404, "unknown_preset", f"no preset {body.preset!r}")
            doc = spec_to_dict(PRESETS[body.preset])
        else:
            doc = dict(body.spec)
        for field in ("model", "alpha", "horizon"):
            value = getattr(body, field)
            if value is not None:
                doc[field] = value
        try:
            return spec_from_dict(doc)
        except SpecError as exc:
            raise ApiError(400, "invalid_spec", str(exc)) from exc

    @app.get("/presets")
    def list_presets():
        return [
            {
                "name": name,
                "row_labels": list(s.row_labels),
                "column_labels": list(s.column_labels),
                "alpha": s.alpha,
                "horizon": s.horizon,
                "model": s.model,
            }
            for name, s in sorted(PRESETS.items())
        ]

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSession):
        spec = _resolve_spec(body)
        if body.planner not in ("partial", "complete"):
            raise ApiError(400, "invalid_spec", f"unknown planner {body.planner!r}")
        if body.reveal_mode not in ("outcome_only", "row_on_play"):
            raise ApiError(400, "invalid_spec", f"unknown reveal_mode {body.reveal_mode!r}")
        try:
            _plan_for(spec, body.planner)
        except CapacityError as exc:
            raise ApiError(400, "capacity", str(exc)) from exc
        state = {
            "id": uuid.uuid4().hex,
            "preset": body.preset,
            "spec": spec_to_dict(spec),
            "planner": body.planner,
            "reveal_mode": body.reveal_mode,
            "round": 1,
            "phase": PHASE_HUMAN,
            "leader_belief": [int(Cell.UNPLAYED)] * spec.n_rows,
            "leader_cell": int(Cell.UNPLAYED),
            "leader_revealed": [False] * spec.n_rows,
            "pending_row": None,
            "transcript": [],
            "cumulative": 0.0,
        }
        store.save(state)
        return _session_view(state, spec)

    def _load(session_id: str) -> tuple[dict, GameSpec]:
        state = store.load(session_id)
        return state, spec_from_dict(state["spec"])

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        state, spec = _load(session_id)
        return _session_view(state, spec)

    @app.post("/sessions/{session_id}/action")
    def submit_human_action(session_id: str, body: HumanAction):
        with store.lock_for(session_id):
            state, spec = _load(session_id)
            if state["phase"] != PHASE_HUMAN:
                raise ApiError(
                    409, "wrong_phase",
                    f"human action not accepted in phase {state['phase']}",
                    phase=state["phase"],
                )
            if not 0 <= body.column < spec.n_cols:
                raise ApiError(
                    400, "bad_column",
                    f"column {body.column} outside 0..{spec.n_cols - 1}",
                    phase=state["phase"],
                )
            row = _leader_action(state, spec)
            reward = spec.rewards[row][body.column]
            state["cumulative"] += reward
            entry = {
                "round": state["round"],
                "row": row,
                "row_label": spec.row_labels[row],
                "column": body.column,
                "column_label": spec.column_labels[body.column],
                "reward": reward,
                "declared_learned": None,
            }
            note = _outcome_note(state, row, body.column)
            if note:
                entry["note"] = note
            state["transcript"].append(entry)
            if spec.model == "M2" and spec.revealing[row]:
                state["phase"] = PHASE_DECLARE
                state["pending_row"] = row
            else:
                _advance_observation(state, spec, row, reward)
                state["round"] += 1
                state["phase"] = PHASE_FINISHED if state["round"] > spec.horizon else PHASE_HUMAN
            store.save(state)
            view = _session_view(state, spec)
            view["outcome"] = entry
            return view

    @app.post("/sessions/{session_id}/learned")
    def declare_learned(session_id: str, body: LearnedDeclaration):
        with store.lock_for(session_id):
            state, spec = _load(session_id)
            if spec.model != "M2":
                raise ApiError(
                    409, "wrong_model",
                    f"learned declarations apply to M2 sessions only, this is {spec.model}",
                    phase=state["phase"],
                )
            if state["phase"] != PHASE_DECLARE:
                raise ApiError(
                    409, "wrong_phase",
                    f"no declaration expected in phase {state['phase']}",
                    phase=state["phase"],
                )
            row = state["pending_row"]
            if body.learned:
                state["leader_revealed"][row] = True
            state["transcript"][-1]["declared_learned"] = bool(body.learned)
            state["pending_row"] = None
            state["round"] += 1
            state["phase"] = PHASE_FINISHED if state["round"] > spec.horizon else PHASE_HUMAN
            store.save(state)
            return _session_view(state, spec)

    @app.get("/sessions/{session_id}/transcript.csv")
    def transcript_csv(session_id: str):
        state, spec = _load(session_id)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["round", "leader_action", "human_action", "reward", "cumulative_reward", "declared_learned"]
        )
        running = 0.0
        for e in state["transcript"]:
            running += e["reward"]
            writer.writerow(
                [
                    e["round"],
                    e["row_label"],
                    e["column_label"],
                    repr(float(e["reward"])),
                    repr(running),
                    "" if e.get("declared_learned") is None else str(e["declared_learned"]).lower(),
                ]
            )
        return PlainTextResponse(buf.getvalue(), media_type="text/csv")

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
