"""Authoritative game-session service for the playground UI.

Sessions hold an instance plus the log of accepted inputs; every state is
derived by replaying that log through the engine, so the server never trusts
client-computed state and undo is a log pop.  The wire format is versioned
JSON (``v: 1``) over HTTP plus a WebSocket per session.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel

from .board import Board, OverflowLock
from .engine import (
    GravityMode,
    PieceState,
    hard_drop,
    is_supported,
    lock_and_clear,
    rotate,
    shift,
    spawn_state,
)
from .model import Instance, Objective, ParseError, parse
from .solver import replay as replay_script
from .model import parse_witness

INPUTS = ("left", "right", "soft_drop", "hard_drop", "rotate_cw", "rotate_ccw", "lock")
UNDO_DEPTH = 50


class IllegalInput(Exception):
    pass


@dataclass
class Derived:
    board: Board
    cursor: int
    active: PieceState | None
    status: str  # playing | cleared | survived | lost
    last_kick_test: int | None
    cleared_rows: int


def _spawn(inst: Instance, board: Board, cursor: int, mode: GravityMode):
    if cursor >= len(inst.sequence):
        return None
    st = spawn_state(board, inst.sequence[cursor])
    if mode is GravityMode.TWENTY_G:
        st = hard_drop(board, st)
    return st


def _terminal_status(inst: Instance, board: Board) -> str:
    if inst.objective is Objective.CLEAR:
        return "cleared" if board.is_empty() else "lost"
    return "survived"


def derive(inst: Instance, log: list[str]) -> Derived:
    """Replay the accepted-input log through a fresh engine."""
    board = inst.board
    cursor = 0
    mode = inst.mode
    cleared_total = 0
    last_test: int | None = None
    active = _spawn(inst, board, cursor, mode)
    status = "playing" if active is not None else _terminal_status(inst, board)

    def lock_current(state: PieceState):
        nonlocal board, cursor, active, status, cleared_total
        try:
            board, cleared = lock_and_clear(board, state)
        except OverflowLock:
            active = None
            status = "lost"
            return
        cleared_total += cleared
        cursor += 1
        active = _spawn(inst, board, cursor, mode)
        if active is None:
            status = _terminal_status(inst, board)

    for entry in log:
        assert status == "playing" and active is not None, "log extends past game end"
        if entry in ("left", "right"):
            dx = -1 if entry == "left" else 1
            moved = shift(board, active, dx, 0)
            assert moved is not None
            active = hard_drop(board, moved) if mode is GravityMode.TWENTY_G else moved
        elif entry == "soft_drop":
            moved = shift(board, active, 0, -1)
            assert moved is not None
            active = moved
        elif entry in ("rotate_cw", "rotate_ccw"):
            res = rotate(board, active, entry == "rotate_cw")
            assert res is not None
            last_test = res.test
            active = res.state
            if mode is GravityMode.TWENTY_G:
                active = hard_drop(board, active)
        elif entry == "hard_drop":
            lock_current(hard_drop(board, active))
        elif entry == "lock":
            lock_current(active)
        else:
            raise AssertionError(f"bad log entry {entry!r}")
    return Derived(board, cursor, active, status, last_test, cleared_total)


def check_input(inst: Instance, st: Derived, entry: str) -> None:
    """Raise IllegalInput when the entry cannot be accepted."""
    if entry not in INPUTS:
        raise IllegalInput(f"unknown input {entry!r}")
    if st.status != "playing" or st.active is None:
        raise IllegalInput("game over")
    mode = inst.mode
    board, active = st.board, st.active
    if entry == "soft_drop":
        if mode is not GravityMode.STANDARD:
            raise IllegalInput("mode forbids soft drop")
        if shift(board, active, 0, -1) is None:
            raise IllegalInput("blocked")
    elif entry in ("left", "right"):
        if shift(board, active, -1 if entry == "left" else 1, 0) is None:
            raise IllegalInput("blocked")
    elif entry in ("rotate_cw", "rotate_ccw"):
        if rotate(board, active, entry == "rotate_cw") is None:
            raise IllegalInput("rotation rejected")
    elif entry == "lock":
        if mode is not GravityMode.STANDARD:
            raise IllegalInput("mode locks only via hard drop")
        if not is_supported(board, active):
            raise IllegalInput("piece is not supported")
    # hard_drop is always legal while playing


@dataclass
class Session:
    sid: str
    instance: Instance
    log: list[str] = field(default_factory=list)
    state: Derived = None  # type: ignore[assignment]

    def __post_init__(self):
        self.state = derive(self.instance, self.log)

    def apply(self, entry: str) -> Derived:
        check_input(self.instance, self.state, entry)
        self.log.append(entry)
        self.state = derive(self.instance, self.log)
        return self.state

    def undo(self) -> Derived:
        if not self.log:
            raise IllegalInput("nothing to undo")
        self.log.pop()
        self.state = derive(self.instance, self.log)
        return self.state

    def payload(self) -> dict:
        st = self.state
        inst = self.instance
        nxt = [str(p) for p in inst.sequence[st.cursor + 1 : st.cursor + 6]]
        active = None
        ghost = None
        if st.active is not None:
            active = {
                "piece": str(st.active.piece),
                "orient": st.active.orient.label(),
                "x": st.active.x,
                "y": st.active.y,
                "cells": [list(c) for c in sorted(st.active.cells())],
            }
            ghost = [list(c) for c in sorted(hard_drop(st.board, st.active).cells())]
        return {
            "v": 1,
            "session": self.sid,
            "width": st.board.width,
            "height": st.board.height,
            "rows": [
                "".join("#" if st.board.filled(x, y) else "." for x in range(st.board.width))
                for y in range(st.board.height)
            ],
            "active": active,
            "ghost": ghost,
            "next": nxt,
            "cursor": st.cursor,
            "pieces_total": len(inst.sequence),
            "status": st.status,
            "kick_test": st.last_kick_test,
            "cleared_rows": st.cleared_rows,
            "objective": str(inst.objective),
            "mode": str(inst.mode),
            "log_length": len(self.log),
        }


class InstanceUpload(BaseModel):
    document: str


class SessionCreate(BaseModel):
    instance_id: str


def create_app() -> FastAPI:
    app = FastAPI(title="srstris session service")
    instances: dict[str, Instance] = {}
    sessions: dict[str, Session] = {}
    counter = itertools.count(1)

    @app.post("/instances")
    def upload(body: InstanceUpload):
        try:
            inst = parse(body.document)
        except ParseError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        iid = f"i{next(counter)}"
        instances[iid] = inst
        return {"v": 1, "instance_id": iid, "pieces": len(inst.sequence)}

    @app.post("/sessions")
    def create(body: SessionCreate):
        inst = instances.get(body.instance_id)
        if inst is None:
            raise HTTPException(status_code=404, detail="instance not found")
        sid = f"s{next(counter)}"
        sessions[sid] = Session(sid, inst)
        return sessions[sid].payload()

    @app.get("/session/{sid}/state")
    def state(sid: str):
        session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail="session not found")
        return session.payload()

    @app.post("/session/{sid}/replay")
    def replay_witness(sid: str, body: InstanceUpload):
        session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail="session not found")
        try:
            script = parse_witness(body.document)
        except ParseError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        outcome = replay_script(session.instance, script)
        return {
            "v": 1,
            "status": outcome.status,
            "failed_index": outcome.failed_index,
            "reason": outcome.reason,
            "placements": [
                {"piece": str(s.piece), "orient": s.orient.label(),
                 "x": s.x, "y": s.y, "cells": [list(c) for c in sorted(s.cells())]}
                for s in script
            ],
        }

    @app.websocket("/session/{sid}")
    async def socket(ws: WebSocket, sid: str):
        await ws.accept()
        session = sessions.get(sid)
        if session is None:
            await ws.send_json({"v": 1, "error": "session not found"})
            await ws.close()
            return
        await ws.send_json(session.payload())
        try:
            while True:
                msg = await ws.receive_json()
                op = msg.get("op")
                try:
                    if op == "input":
                        session.apply(msg.get("input", ""))
                    elif op == "undo":
                        session.undo()
                    elif op == "state":
                        pass
                    else:
                        await ws.send_json({"v": 1, "error": f"unknown op {op!r}"})
                        continue
                    await ws.send_json(session.payload())
                except IllegalInput as exc:
                    payload = session.payload()
                    payload["error"] = str(exc)
                    await ws.send_json(payload)
        except WebSocketDisconnect:
            return

    return app
