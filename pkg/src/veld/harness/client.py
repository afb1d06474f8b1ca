"""A protocol-conformant simulated client.

Keeps a live :class:`~veld.state.RoomState` mirror the same way a real client
would: the join snapshot seeds it, every received ``EVENT`` is applied through
the shared reducer, and the client's *own* accepted actions are applied when
their ``ACK`` arrives (the server never echoes an ``EVENT`` back to the
actor). Both paths advance ``last_seq`` and feed the gap counter, so a mirror
digest comparison at quiescence is a complete convergence check.
"""

from __future__ import annotations

import asyncio
import json
import time
from collections import deque
from typing import Any, Callable

from veld.actions import ActionEnvelope
from veld.digest import state_digest, state_from_snapshot
from veld.reducers import apply_action
from veld.state import RoomState, with_occupant, without_occupant

#: ERROR codes that terminate exactly one pending ACTION.
ACTION_REJECTION_CODES = frozenset(
    {"UNAUTHORIZED", "UNKNOWN_KIND", "INVALID_PAYLOAD", "ILLEGAL_TRANSITION"}
)


class TcpClientConnection:
    """Client side of a TCP connection; same shape as MemoryConnection."""

    def __init__(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        self._reader = reader
        self._writer = writer
        self._closed = False

    @classmethod
    async def open(cls, host: str, port: int) -> "TcpClientConnection":
        reader, writer = await asyncio.open_connection(host, port, limit=1 << 20)
        return cls(reader, writer)

    def send_line(self, line: str) -> None:
        if not self._closed:
            self._writer.write(line.encode("utf-8") + b"\n")

    async def recv_line(self) -> str | None:
        try:
            raw = await self._reader.readline()
        except (ConnectionError, asyncio.LimitOverrunError):
            return None
        if not raw:
            return None
        return raw.decode("utf-8", errors="replace")

    def close(self) -> None:
        if not self._closed:
            self._closed = True
            try:
                self._writer.close()
            except Exception:
                pass


class SimClient:
    def __init__(self, conn, name: str, token: str | None = None):
        self.conn = conn
        self.name = name
        self.token = token
        self.client_id: str | None = None
        self.role: str | None = None
        self.room: str | None = None
        self.mirror: RoomState | None = None
        self.last_seq = 0
        self.max_seq_gap = 0
        self.events_received = 0
        self.acks_received = 0
        self.snapshots_received = 0
        self.messages_received = 0
        self.errors: list[dict[str, Any]] = []
        self.event_log: list[dict[str, Any]] = []
        self.roster: dict[str, dict[str, Any]] = {}
        #: seq -> monotonic time the EVENT was applied (receiver side only).
        self.apply_times: dict[int, float] = {}
        #: seq -> monotonic send time of this client's own accepted actions.
        self.send_times: dict[int, float] = {}
        self._pending: deque[tuple[dict[str, Any], float]] = deque()
        self._watchers: list[tuple[Callable[[], bool], asyncio.Future]] = []
        self._reader_task: asyncio.Task | None = None
        self._closed = False

    # -- lifecycle ----------------------------------------------------------

    async def hello(self) -> None:
        self._reader_task = asyncio.ensure_future(self._read_loop())
        msg: dict[str, Any] = {"t": "HELLO", "name": self.name}
        if self.token is not None:
            msg["token"] = self.token
        self._send(msg)
        await self.wait_until(lambda: self.client_id is not None or self._closed)
        if self.client_id is None:
            raise ConnectionError(f"hello refused: {self.errors[-1] if self.errors else 'connection closed'}")

    async def join(self, room: str, binding: str = "slides") -> None:
        snapshots_before = self.snapshots_received
        errors_before = len(self.errors)
        self._send({"t": "JOIN", "room": room, "binding": binding})
        await self.wait_until(
            lambda: self.snapshots_received > snapshots_before or len(self.errors) > errors_before
        )
        if self.snapshots_received == snapshots_before:
            raise ConnectionError(f"join failed: {self.errors[-1]}")

    def leave(self) -> None:
        self._send({"t": "LEAVE"})

    async def close(self) -> None:
        self._closed = True
        self.conn.close()
        if self._reader_task is not None:
            try:
                await asyncio.wait_for(self._reader_task, timeout=5)
            except (asyncio.TimeoutError, asyncio.CancelledError):
                self._reader_task.cancel()

    # -- outbound -----------------------------------------------------------

    def send_action(self, app: str, kind: str, payload: dict[str, Any] | None = None) -> None:
        body = {
            "t": "ACTION",
            "room": self.room,
            "app": app,
            "kind": kind,
            "payload": payload or {},
            "cts": int(time.time() * 1000),
        }
        self._pending.append((body, time.monotonic()))
        self._send(body)

    async def action(self, app: str, kind: str, payload: dict[str, Any] | None = None) -> int:
        """Send one action and wait for its ACK; returns the assigned seq."""
        acked_before = self.acks_received
        sent_before = acked_before + len(self._pending)
        self.send_action(app, kind, payload)
        before_err = len(self.errors)
        await self.wait_until(lambda: self.acks_received > sent_before or len(self.errors) > before_err)
        if self.acks_received <= sent_before:
            raise ConnectionError(f"action rejected: {self.errors[-1]}")
        return self.last_ack_seq

    def send_pos(self, x: float, y: float, z: float) -> None:
        self._send({"t": "POS", "x": x, "y": y, "z": z})

    # -- introspection --------------------------------------------------------

    def digest(self) -> str:
        if self.mirror is None:
            raise RuntimeError("no room joined")
        return state_digest(self.mirror)

    async def wait_until(self, predicate: Callable[[], bool], timeout: float = 30.0) -> None:
        if predicate():
            return
        fut: asyncio.Future = asyncio.get_running_loop().create_future()
        self._watchers.append((predicate, fut))
        await asyncio.wait_for(fut, timeout)

    async def wait_for_seq(self, seq: int, timeout: float = 30.0) -> None:
        await self.wait_until(lambda: self.last_seq >= seq or self._closed, timeout)
        if self.last_seq < seq:
            raise ConnectionError("connection closed before reaching seq")

    # -- inbound ------------------------------------------------------------

    async def _read_loop(self) -> None:
        while True:
            line = await self.conn.recv_line()
            if line is None:
                break
            if not line.strip():
                continue
            self._on_message(json.loads(line))
        self._closed = True
        self._notify()

    def _on_message(self, msg: dict[str, Any]) -> None:
        self.messages_received += 1
        t = msg.get("t")
        if t == "WELCOME":
            self.client_id = msg["client_id"]
            self.role = msg["role"]
        elif t == "SNAPSHOT":
            self.mirror, self.last_seq = state_from_snapshot(msg)
            self.room = msg["room"]
            self.roster = {}
            self.snapshots_received += 1
        elif t == "EVENT":
            self._apply_event(msg)
        elif t == "ACK":
            self._apply_ack(msg)
        elif t == "PRESENCE":
            self._apply_presence(msg)
        elif t == "ERROR":
            self.errors.append(msg)
            if msg.get("code") in ACTION_REJECTION_CODES and self._pending:
                self._pending.popleft()
        self._notify()

    def _apply_event(self, msg: dict[str, Any]) -> None:
        seq = int(msg["seq"])
        self._track_seq(seq)
        envelope = ActionEnvelope(
            room_id=msg["room"],
            app_id=msg["app"],
            actor_id=msg["actor"],
            kind=msg["kind"],
            payload=msg["payload"],
            seq=seq,
        )
        assert self.mirror is not None
        self.mirror = apply_action(self.mirror, envelope)
        self.apply_times[seq] = time.monotonic()
        self.events_received += 1
        self.event_log.append(msg)

    def _apply_ack(self, msg: dict[str, Any]) -> None:
        seq = int(msg["seq"])
        self._track_seq(seq)
        body, sent_at = self._pending.popleft()
        envelope = ActionEnvelope(
            room_id=body["room"],
            app_id=body["app"],
            actor_id=self.client_id or "",
            kind=body["kind"],
            payload=body["payload"],
            client_ts=body["cts"],
            seq=seq,
        )
        assert self.mirror is not None
        self.mirror = apply_action(self.mirror, envelope)
        self.send_times[seq] = sent_at
        self.acks_received += 1
        self.last_ack_seq = seq

    def _apply_presence(self, msg: dict[str, Any]) -> None:
        kind = msg.get("kind")
        cid = msg.get("client_id")
        if kind == "join":
            self.roster[cid] = {
                "name": msg.get("name"),
                "role": msg.get("role"),
                "position": (msg.get("x", 0.0), msg.get("y", 0.0), msg.get("z", 0.0)),
            }
            if self.mirror is not None:
                self.mirror = with_occupant(self.mirror, cid)
        elif kind == "leave":
            self.roster.pop(cid, None)
            if self.mirror is not None:
                self.mirror = without_occupant(self.mirror, cid)
        elif kind == "pos":
            entry = self.roster.setdefault(cid, {"name": None, "role": None, "position": None})
            entry["position"] = (msg.get("x"), msg.get("y"), msg.get("z"))

    def _track_seq(self, seq: int) -> None:
        gap = seq - (self.last_seq + 1)
        if gap > 0:
            self.max_seq_gap = max(self.max_seq_gap, gap)
        self.last_seq = max(self.last_seq, seq)

    def _send(self, msg: dict[str, Any]) -> None:
        self.conn.send_line(json.dumps(msg, separators=(",", ":"), ensure_ascii=False))

    def _notify(self) -> None:
        if not self._watchers:
            return
        still_waiting = []
        for predicate, fut in self._watchers:
            if fut.done():
                continue
            if predicate():
                fut.set_result(None)
            else:
                still_waiting.append((predicate, fut))
        self._watchers = still_waiting


__all__ = ["ACTION_REJECTION_CODES", "SimClient", "TcpClientConnection"]
