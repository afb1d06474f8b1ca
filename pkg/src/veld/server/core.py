"""The authoritative control plane, independent of any transport.

One :class:`LessonServer` owns every room. Transports (TCP, WebSocket bridge,
in-memory) feed it complete protocol lines via :meth:`LessonServer.handle_line`
and surface outbound lines through a small ``send_line``/``close`` duck type.

All handlers are synchronous: under asyncio's single-threaded loop the whole
accept-action pipeline (authorize -> validate -> assign seq -> apply -> append
-> broadcast) runs without interleaving, which is what serializes mutations
per room. Rejected actions never consume a sequence number and are reported
to the actor only.

Wire protocol (newline-delimited UTF-8 JSON, one object per line):

* client->server: ``HELLO{token?, name}``, ``JOIN{room, binding}``,
  ``LEAVE{}``, ``ACTION{room, app, kind, payload, cts}``, ``POS{x, y, z}``
* server->client: ``WELCOME{client_id, role}``, ``SNAPSHOT{room, last_seq,
  state}``, ``EVENT{seq, room, app, kind, payload, actor}``, ``ACK{seq}``,
  ``PRESENCE{kind: join|leave|pos, client_id, ...}``, ``ERROR{code, detail}``
"""

from __future__ import annotations

import asyncio
import json
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Protocol

from veld.actions import ActionEnvelope, ReducerError, Role, authorize
from veld.digest import make_snapshot, state_digest
from veld.reducers import apply_action
from veld.server.config import ServerConfig
from veld.state import REGISTERED_APPS, RoomState, initial_room_state, with_occupant, without_occupant
from veld.world import DEFAULT_PORTAL_ACTIVATION_M, LessonModule, Portal, World, load_world_file

log = logging.getLogger(__name__)


class Transport(Protocol):
    def send_line(self, line: str) -> None: ...
    def close(self) -> None: ...


class SessionError(Exception):
    """Request-level failure reported to the offending client only."""

    def __init__(self, code: str, detail: str):
        super().__init__(f"{code}: {detail}")
        self.code = code
        self.detail = detail


def _encode(message: dict[str, Any]) -> str:
    return json.dumps(message, separators=(",", ":"), ensure_ascii=False)


@dataclass
class ClientSession:
    """One connected participant."""

    client_id: str
    role: Role
    display_name: str
    transport: Transport
    room_id: str | None = None
    binding: str | None = None
    position: tuple[float, float, float] | None = None
    # presence coalescing
    _pos_last_sent: float = 0.0
    _pos_flush_pending: bool = False

    def send(self, message: dict[str, Any]) -> None:
        self.transport.send_line(_encode(message))


@dataclass
class RoomLog:
    """Append-only, gap-free action log; entries[i].seq == i + 1."""

    room_id: str
    next_seq: int = 1
    entries: list[ActionEnvelope] = field(default_factory=list)

    def append(self, action: ActionEnvelope) -> None:
        assert action.seq == self.next_seq
        self.entries.append(action)
        self.next_seq += 1

    @property
    def last_seq(self) -> int:
        return self.next_seq - 1


@dataclass
class Room:
    lesson: LessonModule
    state: RoomState
    log: RoomLog
    sessions: dict[str, ClientSession] = field(default_factory=dict)
    # Pod assignment is session-plumbing like positions, not replicated state:
    # it only influences server-side clamping while pods are locked.
    pod_assignment: dict[str, str] = field(default_factory=dict)


class ConnectionCtx:
    """Transport-side handle for one connection, pre- or post-HELLO."""

    __slots__ = ("transport", "session", "closed")

    def __init__(self, transport: Transport):
        self.transport = transport
        self.session: ClientSession | None = None
        self.closed = False

    def send(self, message: dict[str, Any]) -> None:
        self.transport.send_line(_encode(message))


class LessonServer:
    """Sequences accepted actions per room and fans them out to occupants."""

    def __init__(self, config: ServerConfig, world: World | None = None):
        self.config = config
        if world is None:
            if not config.world_file:
                raise ValueError("a World or config.world_file is required")
            world = load_world_file(config.world_file)
        self.world = world
        self.audio_zone = world.audio_zone or config.audio_zone_defaults
        self.rooms: dict[str, Room] = {
            name: Room(lesson=lesson, state=initial_room_state(name), log=RoomLog(room_id=name))
            for name, lesson in world.lessons.items()
        }
        self.sessions: dict[str, ClientSession] = {}
        self._next_client_num = 1

    # -- transport entry points -------------------------------------------

    def connect(self, transport: Transport) -> ConnectionCtx:
        return ConnectionCtx(transport)

    def disconnect(self, ctx: ConnectionCtx) -> None:
        """Abrupt drops and clean closes land here; same path as LEAVE."""
        if ctx.closed:
            return
        ctx.closed = True
        session = ctx.session
        if session is None:
            return
        if session.room_id is not None:
            self._leave_room(session)
        self.sessions.pop(session.client_id, None)
        ctx.session = None

    def handle_line(self, ctx: ConnectionCtx, line: str) -> None:
        if ctx.closed:
            return
        line = line.strip()
        if not line:
            return
        try:
            message = json.loads(line)
            if not isinstance(message, dict):
                raise ValueError("message must be a JSON object")
            kind = message.get("t")
        except ValueError:
            message, kind = None, None

        if ctx.session is None:
            # First message on a connection must be a well-formed HELLO.
            if message is None or kind != "HELLO":
                self._drop(ctx)
                return
            self._handle_hello(ctx, message)
            return

        if message is None:
            ctx.send({"t": "ERROR", "code": "MALFORMED", "detail": "message is not a JSON object"})
            return
        try:
            if kind == "JOIN":
                self._handle_join(ctx.session, message)
            elif kind == "LEAVE":
                self._handle_leave(ctx.session)
            elif kind == "ACTION":
                self._handle_action(ctx.session, message)
            elif kind == "POS":
                self._handle_pos(ctx.session, message)
            else:
                raise SessionError("MALFORMED", f"unknown message type {kind!r}")
        except SessionError as err:
            ctx.session.send({"t": "ERROR", "code": err.code, "detail": err.detail})

    # -- message handlers --------------------------------------------------

    def _handle_hello(self, ctx: ConnectionCtx, message: dict[str, Any]) -> None:
        name = message.get("name")
        token = message.get("token")
        if not isinstance(name, str) or not name or not (token is None or isinstance(token, str)):
            self._drop(ctx)
            return
        if len(self.sessions) >= self.config.max_clients:
            ctx.send({"t": "ERROR", "code": "SERVER_FULL", "detail": f"server is at capacity ({self.config.max_clients})"})
            self._drop(ctx)
            return
        role = Role.INSTRUCTOR if token == self.config.instructor_token else Role.STUDENT
        client_id = f"c{self._next_client_num}"
        self._next_client_num += 1
        session = ClientSession(client_id=client_id, role=role, display_name=name, transport=ctx.transport)
        self.sessions[client_id] = session
        ctx.session = session
        session.send({"t": "WELCOME", "client_id": client_id, "role": role.value})

    def _handle_join(self, session: ClientSession, message: dict[str, Any]) -> None:
        room_id = message.get("room")
        binding = message.get("binding")
        if not isinstance(room_id, str) or not isinstance(binding, str):
            raise SessionError("MALFORMED", "JOIN needs 'room' and 'binding' strings")
        if session.room_id is not None:
            raise SessionError("ALREADY_JOINED", f"already in room '{session.room_id}'; LEAVE first")
        if room_id not in self.rooms:
            raise SessionError("UNKNOWN_ROOM", f"no lesson named '{room_id}'")
        if binding not in REGISTERED_APPS:
            raise SessionError("INVALID_BINDING", f"'{binding}' is not a registered app")
        self._join_room(session, room_id, binding)

    def _join_room(self, session: ClientSession, room_id: str, binding: str) -> None:
        room = self.rooms[room_id]
        session.room_id = room_id
        session.binding = binding
        session.position = room.lesson.spawn_point
        room.state = with_occupant(room.state, session.client_id)
        room.sessions[session.client_id] = session
        # Joiner gets the snapshot (which already includes itself) and then a
        # roster replay; everyone else learns about the joiner via presence.
        session.send(make_snapshot(room.state, room.log.last_seq))
        self._broadcast(room, self._presence_join(session), exclude=session.client_id)
        for other in room.sessions.values():
            if other.client_id != session.client_id:
                session.send(self._presence_join(other))

    def _presence_join(self, session: ClientSession) -> dict[str, Any]:
        x, y, z = session.position if session.position is not None else (0.0, 0.0, 0.0)
        return {
            "t": "PRESENCE",
            "kind": "join",
            "client_id": session.client_id,
            "name": session.display_name,
            "role": session.role.value,
            "x": x,
            "y": y,
            "z": z,
        }

    def _handle_leave(self, session: ClientSession) -> None:
        if session.room_id is None:
            raise SessionError("NOT_IN_ROOM", "LEAVE without having joined a room")
        self._leave_room(session)

    def _leave_room(self, session: ClientSession) -> None:
        room = self.rooms[session.room_id]  # type: ignore[index]
        room.sessions.pop(session.client_id, None)
        room.pod_assignment.pop(session.client_id, None)
        room.state = without_occupant(room.state, session.client_id)
        session.room_id = None
        session.binding = None
        session.position = None
        session._pos_flush_pending = False
        self._broadcast(room, {"t": "PRESENCE", "kind": "leave", "client_id": session.client_id})

    def _handle_action(self, session: ClientSession, message: dict[str, Any]) -> None:
        room_id = message.get("room")
        app = message.get("app")
        kind = message.get("kind")
        payload = message.get("payload")
        cts = message.get("cts")
        if (
            not isinstance(room_id, str)
            or not isinstance(app, str)
            or not isinstance(kind, str)
            or not isinstance(payload, dict)
            or isinstance(cts, bool)
            or not isinstance(cts, int)
        ):
            raise SessionError("MALFORMED", "ACTION needs room, app, kind, payload, cts")
        if session.room_id != room_id:
            raise SessionError("NOT_IN_ROOM", f"not joined to room '{room_id}'")
        room = self.rooms[room_id]

        action = ActionEnvelope(
            room_id=room_id,
            app_id=app,
            actor_id=session.client_id,
            kind=kind,
            payload=payload,
            client_ts=cts,
            seq=room.log.next_seq,
        )
        if not authorize(session.role, action):
            raise SessionError("UNAUTHORIZED", "only instructors may change shared state")
        try:
            new_state = apply_action(room.state, action)
        except ReducerError as err:
            # Speculative seq is discarded; rejects never consume a number.
            raise SessionError(err.code, err.detail or err.code)
        room.state = new_state
        room.log.append(action)
        session.send({"t": "ACK", "seq": action.seq})
        event = {
            "t": "EVENT",
            "seq": action.seq,
            "room": room_id,
            "app": app,
            "kind": kind,
            "payload": payload,
            "actor": session.client_id,
        }
        self._broadcast(room, event, exclude=session.client_id)

    def _handle_pos(self, session: ClientSession, message: dict[str, Any]) -> None:
        try:
            x = float(message["x"])
            y = float(message["y"])
            z = float(message["z"])
            if not all(math.isfinite(c) for c in (x, y, z)):
                raise ValueError
        except (KeyError, TypeError, ValueError):
            raise SessionError("MALFORMED", "POS needs finite numeric x, y, z")
        if session.room_id is None:
            raise SessionError("NOT_IN_ROOM", "POS before joining a room")
        room = self.rooms[session.room_id]
        session.position = self._clamp_to_pod(room, session, (x, y, z))
        self._schedule_pos_broadcast(room, session)

    def _clamp_to_pod(
        self, room: Room, session: ClientSession, requested: tuple[float, float, float]
    ) -> tuple[float, float, float]:
        """While pods are locked, a student assigned to a pod cannot be stored
        outside its sphere; instructors are never clamped."""
        if not room.state.pods_locked or session.role is Role.INSTRUCTOR:
            return requested
        pod_id = room.pod_assignment.get(session.client_id)
        pod = room.lesson.pod(pod_id) if pod_id is not None else None
        if pod is None:
            return requested
        dx = requested[0] - pod.center[0]
        dy = requested[1] - pod.center[1]
        dz = requested[2] - pod.center[2]
        dist = math.sqrt(dx * dx + dy * dy + dz * dz)
        if dist <= pod.radius:
            return requested
        scale = pod.radius / dist
        return (pod.center[0] + dx * scale, pod.center[1] + dy * scale, pod.center[2] + dz * scale)

    def _schedule_pos_broadcast(self, room: Room, session: ClientSession) -> None:
        rate = self.config.presence_rate_hz
        if rate <= 0:
            self._broadcast_pos(room, session)
            return
        interval = 1.0 / rate
        now = time.monotonic()
        if now - session._pos_last_sent >= interval:
            session._pos_last_sent = now
            self._broadcast_pos(room, session)
            return
        if session._pos_flush_pending:
            return  # coalesce: the pending flush will pick up the latest position
        session._pos_flush_pending = True
        delay = interval - (now - session._pos_last_sent)
        try:
            loop = asyncio.get_running_loop()
        except RuntimeError:
            # No loop (synchronous use): fall back to immediate delivery.
            session._pos_flush_pending = False
            session._pos_last_sent = now
            self._broadcast_pos(room, session)
            return
        loop.call_later(delay, self._flush_pos, room, session)

    def _flush_pos(self, room: Room, session: ClientSession) -> None:
        if not session._pos_flush_pending:
            return
        session._pos_flush_pending = False
        if session.room_id != room.lesson.name or session.position is None:
            return
        session._pos_last_sent = time.monotonic()
        self._broadcast_pos(room, session)

    def _broadcast_pos(self, room: Room, session: ClientSession) -> None:
        if session.position is None:
            return
        x, y, z = session.position
        self._broadcast(
            room,
            {"t": "PRESENCE", "kind": "pos", "client_id": session.client_id, "x": x, "y": y, "z": z},
            exclude=session.client_id,
        )

    # -- world operations ---------------------------------------------------

    def teleport(self, session: ClientSession, lesson_name: str) -> None:
        """Relocate a session to a lesson's spawn point by name. Re-targeting
        the current lesson is allowed and resets the position to spawn."""
        if lesson_name not in self.rooms:
            raise SessionError("UNKNOWN_ROOM", f"no lesson named '{lesson_name}'")
        binding = session.binding or self.rooms[lesson_name].lesson.central
        if session.room_id is not None:
            self._leave_room(session)
        self._join_room(session, lesson_name, binding)

    def use_portal(self, session: ClientSession, portal: Portal,
                   activation_m: float = DEFAULT_PORTAL_ACTIVATION_M) -> None:
        if session.position is None or session.room_id is None:
            raise SessionError("NOT_IN_ROOM", "cannot use a portal before joining a room")
        px, py, pz = session.position
        qx, qy, qz = portal.position
        if math.dist((px, py, pz), (qx, qy, qz)) > activation_m:
            raise SessionError("TOO_FAR", f"portal is farther than {activation_m} m")
        self.teleport(session, portal.target)

    def assign_pods(self, room_id: str, assignment: dict[str, str]) -> None:
        """Bind students to pods; clamping takes effect only while the room's
        pods are locked."""
        room = self.rooms[room_id]
        for student_id, pod_id in assignment.items():
            if room.lesson.pod(pod_id) is None:
                raise SessionError("UNKNOWN_POD", f"no pod '{pod_id}' in lesson '{room_id}'")
            if student_id not in room.sessions:
                raise SessionError("UNKNOWN_STUDENT", f"'{student_id}' is not an occupant of '{room_id}'")
        room.pod_assignment.update(assignment)

    # -- introspection -------------------------------------------------------

    def room_digest(self, room_id: str) -> str:
        return state_digest(self.rooms[room_id].state)

    # -- internals -----------------------------------------------------------

    def _broadcast(self, room: Room, message: dict[str, Any], exclude: str | None = None) -> None:
        line = _encode(message)
        for other in room.sessions.values():
            if other.client_id != exclude:
                other.transport.send_line(line)

    def _drop(self, ctx: ConnectionCtx) -> None:
        transport = ctx.transport
        self.disconnect(ctx)
        transport.close()


__all__ = ["ClientSession", "ConnectionCtx", "LessonServer", "Room", "RoomLog", "SessionError", "Transport"]
