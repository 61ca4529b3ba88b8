"""Interactive session service: the programmatic studio backend.

Sessions wrap one drawn world plus at most one engine run. Messages are
UTF-8 JSON objects with a "type" field; the same grammar is served over
WebSocket (primary) and newline-delimited TCP frames (testing). Server
events: session, snapshot, ended, error, plus a minimal ok ack for commands
that carry no data.

A session's messages and its tick loop are serialized behind one lock, so
edits land between ticks and the engine stays deterministic: setup(seed) and
step(n) over the service reproduce a headless run tick for tick.
"""
from __future__ import annotations

import asyncio
import json
import math
import secrets
import time
from dataclasses import dataclass, field
from typing import Optional

from . import engine as eng
from .engine import SimConfig, Snapshot
from .scenarios import UnknownPreset, load_preset
from .world import (
    NoExit,
    OutOfBounds,
    PatchKind,
    World,
    set_patch,
    validate,
)

EDITING = "editing"
PAUSED = "paused"
RUNNING = "running"
ENDED = "ended"

# snapshot stream events per second are capped; faster tick rates batch
# multiple ticks per event
EVENT_RATE_CAP = 30.0

KIND_NAMES = {
    PatchKind.EMPTY: "empty",
    PatchKind.STRUCTURE: "structure",
    PatchKind.EXIT: "exit",
    PatchKind.AUTHORITY_POST: "authority_post",
    PatchKind.HAZARD: "hazard",
}
KINDS_BY_NAME = {name: kind for kind, name in KIND_NAMES.items()}

MAX_WORLD_SIDE = 301
MAX_POPULATION = 5000
MAX_STEP = 10_000


class ProtocolError(Exception):
    def __init__(self, code: str, detail: str):
        super().__init__(detail)
        self.code = code
        self.detail = detail


def agent_payload(view: eng.AgentView) -> dict:
    return {
        "id": view.id,
        "kind": view.kind,
        "x": round(view.x, 4),
        "y": round(view.y, 4),
        "state": view.state,
        "color": view.color,
        "guided": view.guided,
        "status": view.status,
    }


def stats_payload(stats: eng.StatsView) -> dict:
    return {
        "total_citizens": stats.total_citizens,
        "active": stats.active,
        "successful_escapes": stats.successful_escapes,
        "failed_evacuations": stats.failed_evacuations,
        "total_contagions": stats.total_contagions,
        "pct_panicked": round(stats.pct_panicked, 4),
        "pct_alerted": round(stats.pct_alerted, 4),
        "pct_calm": round(stats.pct_calm, 4),
        "duration": stats.duration,
    }


def snapshot_event(
    snap: Snapshot,
    mode: str,
    patches_changed: list[tuple[int, int, PatchKind]] = (),
    reset: bool = False,
) -> dict:
    """The single serialization point for snapshots, shared with tests."""
    return {
        "type": "snapshot",
        "tick": snap.tick,
        "mode": mode,
        "agents": [agent_payload(a) for a in snap.agents],
        "stats": stats_payload(snap.stats),
        "patches_changed": [[x, y, KIND_NAMES[k]] for x, y, k in patches_changed],
        "reset": reset,
    }


def _world_event(
    world: World,
    mode: str,
    patches_changed: list[tuple[int, int, PatchKind]] = (),
    reset: bool = False,
) -> dict:
    # snapshot-shaped event for sessions with no engine yet
    return {
        "type": "snapshot",
        "tick": None,
        "mode": mode,
        "agents": [],
        "stats": None,
        "patches_changed": [[x, y, KIND_NAMES[k]] for x, y, k in patches_changed],
        "reset": reset,
    }


def _nonempty_patches(world: World) -> list[tuple[int, int, PatchKind]]:
    w = world.width
    return [
        (i % w, i // w, kind)
        for i, kind in enumerate(world.patches)
        if kind is not PatchKind.EMPTY
    ]


class Session:
    def __init__(self, session_id: str, width: int, height: int, tick_rate: float):
        self.session_id = session_id
        self.mode = EDITING
        self.world = World.empty(width, height)
        self.state: Optional[eng.SimState] = None
        self.tick_rate = tick_rate
        self.lock = asyncio.Lock()
        self.run_task: Optional[asyncio.Task] = None
        self.subscribers: set[asyncio.Queue] = set()
        self.last_active = time.monotonic()

    def touch(self) -> None:
        self.last_active = time.monotonic()

    def broadcast(self, event: dict) -> None:
        for queue in self.subscribers:
            queue.put_nowait(event)

    def engine_snapshot_event(
        self, patches_changed=(), reset: bool = False
    ) -> dict:
        assert self.state is not None
        return snapshot_event(
            eng.snapshot(self.state), self.mode, patches_changed, reset
        )

    def full_resync_event(self) -> dict:
        world = self.state.world if self.state else self.world
        patches = _nonempty_patches(world)
        if self.state is not None:
            return self.engine_snapshot_event(patches, reset=True)
        return _world_event(world, self.mode, patches, reset=True)


class SessionService:
    """Owns all sessions; transport handlers call handle() per message."""

    def __init__(self, tick_rate: float = 20.0, idle_timeout: float = 1800.0):
        self.tick_rate = tick_rate
        self.idle_timeout = idle_timeout
        self.sessions: dict[str, Session] = {}

    # -- message entry point -------------------------------------------------

    async def handle(self, conn: "Connection", raw: str) -> list[dict]:
        """Process one frame; returns the direct replies for this connection."""
        try:
            msg = json.loads(raw)
        except json.JSONDecodeError as exc:
            return [_error("BadMessage", f"invalid JSON: {exc}")]
        if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
            return [_error("BadMessage", "message must be an object with a type")]
        mtype = msg["type"]
        try:
            if mtype == "create_session":
                return [await self._create_session(conn, msg)]
            session = conn.session
            if session is None:
                raise ProtocolError("BadState", "no session; send create_session first")
            session.touch()
            async with session.lock:
                handler = {
                    "load_preset": self._load_preset,
                    "set_patch": self._set_patch,
                    "setup": self._setup,
                    "run": self._run,
                    "pause": self._pause,
                    "step": self._step,
                    "clear": self._clear,
                    "get_snapshot": self._get_snapshot,
                }.get(mtype)
                if handler is None:
                    raise ProtocolError("BadMessage", f"unknown message type {mtype!r}")
                return await handler(session, msg)
        except ProtocolError as exc:
            return [_error(exc.code, exc.detail)]

    # -- handlers ------------------------------------------------------------

    async def _create_session(self, conn: "Connection", msg: dict) -> dict:
        existing = msg.get("session_id")
        if existing is not None:
            session = self.sessions.get(existing)
            if session is None:
                raise ProtocolError("BadMessage", f"unknown session {existing!r}")
        else:
            width = _int_field(msg, "width", 61, 3, MAX_WORLD_SIDE)
            height = _int_field(msg, "height", 61, 3, MAX_WORLD_SIDE)
            tick_rate = _num_field(msg, "tick_rate", self.tick_rate, 0.1, 1000.0)
            session = Session(secrets.token_hex(8), width, height, tick_rate)
            self.sessions[session.session_id] = session
        if conn.session is not None and conn.session is not session:
            self._detach(conn)
        conn.session = session
        session.subscribers.add(conn.queue)
        session.touch()
        return {
            "type": "session",
            "session_id": session.session_id,
            "width": session.world.width,
            "height": session.world.height,
            "mode": session.mode,
            "tick_rate": session.tick_rate,
        }

    async def _load_preset(self, session: Session, msg: dict) -> list[dict]:
        if session.mode != EDITING:
            raise ProtocolError("BadState", f"load_preset not allowed while {session.mode}")
        name = msg.get("name")
        try:
            preset = load_preset(name)
        except UnknownPreset as exc:
            raise ProtocolError("UnknownPreset", str(exc)) from exc
        session.world = preset.world
        event = session.full_resync_event()
        session.broadcast(event)
        return []

    async def _set_patch(self, session: Session, msg: dict) -> list[dict]:
        if session.mode not in (EDITING, PAUSED):
            raise ProtocolError(
                "BadState", f"set_patch only in editing or paused, not {session.mode}"
            )
        x = _int_field(msg, "x", None, -(10**6), 10**6)
        y = _int_field(msg, "y", None, -(10**6), 10**6)
        kind_name = msg.get("kind")
        kind = KINDS_BY_NAME.get(kind_name)
        if kind is None:
            raise ProtocolError(
                "BadMessage", f"kind must be one of {sorted(KINDS_BY_NAME)}"
            )
        try:
            session.world = set_patch(session.world, (x, y), kind)
            if session.state is not None:
                # mid-run edit while paused: the live engine world (which may
                # carry hazard paint) gets the same change
                session.state.replace_world(
                    set_patch(session.state.world, (x, y), kind)
                )
        except OutOfBounds as exc:
            raise ProtocolError("OutOfBounds", str(exc)) from exc
        changed = [(x, y, kind)]
        if session.state is not None:
            event = session.engine_snapshot_event(changed)
        else:
            event = _world_event(session.world, session.mode, changed)
        session.broadcast(event)
        return []

    async def _setup(self, session: Session, msg: dict) -> list[dict]:
        if session.mode == RUNNING:
            raise ProtocolError("BadState", "pause before setup")
        violations = validate(session.world)
        if violations:
            raise ProtocolError("NoExit", "world needs at least one exit patch")
        config = SimConfig(
            world=session.world,
            initial_population=_int_field(msg, "population", 15, 0, MAX_POPULATION),
            initial_authorities=_int_field(msg, "authorities", 0, 0, 100),
            spawn_exit_authority=_bool_field(msg, "spawn_exit_authority", True),
            deadline=_int_field(msg, "deadline", 1000, 1, 1_000_000),
            seed=_int_field(msg, "seed", 0, -(2**63), 2**63 - 1),
            hazards=_int_field(msg, "hazards", 0, 0, 1000),
        )
        try:
            session.state = eng.setup(config)
        except NoExit as exc:
            raise ProtocolError("NoExit", str(exc)) from exc
        except eng.NotEnoughEmptyPatches as exc:
            raise ProtocolError("NotEnoughEmptyPatches", str(exc)) from exc
        session.mode = ENDED if session.state.phase == eng.ENDED else PAUSED
        event = session.engine_snapshot_event(list(session.state.world_changes))
        session.broadcast(event)
        return []

    async def _run(self, session: Session, msg: dict) -> list[dict]:
        if session.mode != PAUSED or session.state is None:
            raise ProtocolError("BadState", f"run needs a paused session, not {session.mode}")
        self._stop_loop(session)
        session.mode = RUNNING
        session.run_task = asyncio.create_task(self._run_loop(session))
        return [{"type": "ok", "op": "run"}]

    async def _pause(self, session: Session, msg: dict) -> list[dict]:
        if session.mode != RUNNING:
            raise ProtocolError("BadState", f"pause needs a running session, not {session.mode}")
        session.mode = PAUSED
        self._stop_loop(session)
        return [{"type": "ok", "op": "pause"}]

    @staticmethod
    def _stop_loop(session: Session) -> None:
        if session.run_task is not None and not session.run_task.done():
            session.run_task.cancel()
        session.run_task = None

    async def _step(self, session: Session, msg: dict) -> list[dict]:
        if session.mode != PAUSED or session.state is None:
            raise ProtocolError("BadState", f"step needs a paused session, not {session.mode}")
        n = _int_field(msg, "n", 1, 1, MAX_STEP)
        state = session.state
        for _ in range(n):
            if state.phase != eng.RUNNING:
                break
            eng.tick(state)
        events = []
        if state.phase == eng.ENDED:
            session.mode = ENDED
        events.append(session.engine_snapshot_event())
        if session.mode == ENDED:
            events.append(_ended_event(state))
        for event in events:
            session.broadcast(event)
        return []

    async def _clear(self, session: Session, msg: dict) -> list[dict]:
        if session.mode == RUNNING:
            raise ProtocolError("BadState", "pause before clear")
        scope = msg.get("scope", "turtles")
        if scope not in ("turtles", "all"):
            raise ProtocolError("BadMessage", "clear scope must be turtles or all")
        session.state = None
        session.mode = EDITING
        if scope == "all":
            session.world = World.empty(session.world.width, session.world.height)
            event = _world_event(session.world, session.mode, reset=True)
        else:
            # agents discarded, drawn world kept: rerun with the same structure
            event = _world_event(session.world, session.mode)
        session.broadcast(event)
        return []

    async def _get_snapshot(self, session: Session, msg: dict) -> list[dict]:
        return [session.full_resync_event()]

    # -- run loop ------------------------------------------------------------

    async def _run_loop(self, session: Session) -> None:
        events_per_sec = min(session.tick_rate, EVENT_RATE_CAP)
        ticks_per_event = max(1, math.ceil(session.tick_rate / events_per_sec))
        interval = ticks_per_event / session.tick_rate
        while True:
            await asyncio.sleep(interval)
            async with session.lock:
                if session.mode != RUNNING or session.state is None:
                    return
                state = session.state
                for _ in range(ticks_per_event):
                    if state.phase != eng.RUNNING:
                        break
                    eng.tick(state)
                ended = state.phase == eng.ENDED
                if ended:
                    session.mode = ENDED
                session.broadcast(session.engine_snapshot_event())
                if ended:
                    session.broadcast(_ended_event(state))
                    return

    # -- connection lifecycle ------------------------------------------------

    def _detach(self, conn: "Connection") -> None:
        if conn.session is not None:
            conn.session.subscribers.discard(conn.queue)
            conn.session = None

    async def on_disconnect(self, conn: "Connection") -> None:
        session = conn.session
        self._detach(conn)
        if session is not None and session.mode == RUNNING:
            # safe default: a vanished client must not leave a runaway loop
            async with session.lock:
                if session.mode == RUNNING:
                    session.mode = PAUSED
                    self._stop_loop(session)

    async def reap_idle_sessions(self) -> None:
        while True:
            await asyncio.sleep(60.0)
            await self.reap_idle_once()

    async def reap_idle_once(self) -> list[str]:
        """Drop sessions idle past the timeout; returns the dropped ids."""
        now = time.monotonic()
        dropped = []
        for sid in list(self.sessions):
            session = self.sessions[sid]
            if now - session.last_active > self.idle_timeout:
                async with session.lock:
                    if session.mode == RUNNING:
                        session.mode = PAUSED
                    self._stop_loop(session)
                    session.subscribers.clear()
                del self.sessions[sid]
                dropped.append(sid)
        return dropped


def _error(code: str, detail: str) -> dict:
    return {"type": "error", "code": code, "detail": detail}


def _ended_event(state: eng.SimState) -> dict:
    return {
        "type": "ended",
        "tick": state.tick,
        "stats": stats_payload(eng.snapshot(state).stats),
    }


def _int_field(msg: dict, name: str, default, lo: int, hi: int) -> int:
    value = msg.get(name, default)
    if value is None or isinstance(value, bool) or not isinstance(value, int):
        raise ProtocolError("BadMessage", f"{name} must be an integer")
    if not lo <= value <= hi:
        raise ProtocolError("BadMessage", f"{name} must be in [{lo}, {hi}]")
    return value


def _num_field(msg: dict, name: str, default, lo: float, hi: float) -> float:
    value = msg.get(name, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProtocolError("BadMessage", f"{name} must be a number")
    if not lo <= value <= hi:
        raise ProtocolError("BadMessage", f"{name} must be in [{lo}, {hi}]")
    return float(value)


def _bool_field(msg: dict, name: str, default: bool) -> bool:
    value = msg.get(name, default)
    if not isinstance(value, bool):
        raise ProtocolError("BadMessage", f"{name} must be a boolean")
    return value


class Connection:
    """One client connection: a bound session plus its event queue."""

    def __init__(self, service: SessionService):
        self.service = service
        self.session: Optional[Session] = None
        self.queue: asyncio.Queue = asyncio.Queue()


async def _pump(conn: Connection, send) -> None:
    while True:
        event = await conn.queue.get()
        await send(json.dumps(event))


async def handle_tcp_client(
    service: SessionService,
    reader: asyncio.StreamReader,
    writer: asyncio.StreamWriter,
) -> None:
    conn = Connection(service)

    async def send(text: str) -> None:
        writer.write(text.encode("utf-8") + b"\n")
        await writer.drain()

    pump = asyncio.create_task(_pump(conn, send))
    try:
        while True:
            line = await reader.readline()
            if not line:
                break
            raw = line.decode("utf-8").strip()
            if not raw:
                continue
            for reply in await service.handle(conn, raw):
                await send(json.dumps(reply))
    except (ConnectionResetError, asyncio.IncompleteReadError):
        pass
    finally:
        pump.cancel()
        await service.on_disconnect(conn)
        writer.close()


async def serve_tcp(service: SessionService, host: str, port: int) -> asyncio.Server:
    async def client(reader, writer):
        await handle_tcp_client(service, reader, writer)

    return await asyncio.start_server(client, host, port)


async def serve_ws(service: SessionService, host: str, port: int):
    import websockets

    async def handler(websocket):
        conn = Connection(service)
        pump = asyncio.create_task(_pump(conn, websocket.send))
        try:
            async for raw in websocket:
                for reply in await service.handle(conn, raw):
                    await websocket.send(json.dumps(reply))
        except websockets.ConnectionClosed:
            pass
        finally:
            pump.cancel()
            await service.on_disconnect(conn)

    return await websockets.serve(handler, host, port)


async def run_server(
    host: str,
    port: int,
    tick_rate: float = 20.0,
    tcp_bind: tuple[str, int] | None = None,
    idle_timeout: float = 1800.0,
) -> None:
    service = SessionService(tick_rate=tick_rate, idle_timeout=idle_timeout)
    ws_server = await serve_ws(service, host, port)
    print(f"egress-sim serving WebSocket on ws://{host}:{port}")
    tcp_server = None
    if tcp_bind is not None:
        tcp_server = await serve_tcp(service, tcp_bind[0], tcp_bind[1])
        print(f"egress-sim serving TCP frames on {tcp_bind[0]}:{tcp_bind[1]}")
    reaper = asyncio.create_task(service.reap_idle_sessions())
    try:
        await asyncio.Future()
    finally:
        reaper.cancel()
        ws_server.close()
        if tcp_server is not None:
            tcp_server.close()
