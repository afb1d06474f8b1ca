"""In-memory transport: the same line protocol over asyncio queues, with an
optional seeded latency/jitter model for deterministic CI runs.

Per-direction delivery is FIFO even under jitter (delivery times are forced
monotone), so the per-room seq order a client observes is identical to what a
TCP stream would give it. With zero latency, lines are handed over
synchronously, which is the fast path the load harness uses.
"""

from __future__ import annotations

import asyncio
import random
from dataclasses import dataclass

from veld.server.core import ConnectionCtx, LessonServer


@dataclass(frozen=True)
class NetModel:
    """Symmetric one-way delay applied to every line, in milliseconds."""

    base_latency_ms: float = 0.0
    jitter_ms: float = 0.0
    seed: int = 0

    @property
    def lossless_zero(self) -> bool:
        return self.base_latency_ms <= 0.0 and self.jitter_ms <= 0.0


class _DelayedCaller:
    """Schedules calls after a sampled delay, preserving call order."""

    def __init__(self, model: NetModel, rng: random.Random):
        self._model = model
        self._rng = rng
        self._last_due = 0.0

    def submit(self, fn, *args) -> None:
        loop = asyncio.get_running_loop()
        delay = (self._model.base_latency_ms + self._rng.uniform(0.0, self._model.jitter_ms)) / 1000.0
        due = max(loop.time() + delay, self._last_due + 1e-9)
        self._last_due = due
        loop.call_at(due, fn, *args)


class MemoryConnection:
    """Client endpoint of one simulated connection."""

    def __init__(self, server: LessonServer, model: NetModel, rng: random.Random):
        self._server = server
        self._model = model
        self._inbound: asyncio.Queue[str | None] = asyncio.Queue()
        self._to_client = None if model.lossless_zero else _DelayedCaller(model, rng)
        self._to_server = None if model.lossless_zero else _DelayedCaller(model, rng)
        self._closed = False
        self._ctx: ConnectionCtx = server.connect(_MemoryServerSide(self))

    # client -> server
    def send_line(self, line: str) -> None:
        if self._closed:
            return
        if self._to_server is None:
            self._server.handle_line(self._ctx, line)
        else:
            self._to_server.submit(self._server.handle_line, self._ctx, line)

    async def recv_line(self) -> str | None:
        if self._closed and self._inbound.empty():
            return None
        return await self._inbound.get()

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        self._server.disconnect(self._ctx)
        self._inbound.put_nowait(None)

    # server -> client (called by the server-side transport)
    def _deliver(self, line: str) -> None:
        if self._closed:
            return
        if self._to_client is None:
            self._inbound.put_nowait(line)
        else:
            self._to_client.submit(self._inbound.put_nowait, line)


class _MemoryServerSide:
    """What the server sees as the transport for a memory connection."""

    def __init__(self, conn: MemoryConnection):
        self._conn = conn

    def send_line(self, line: str) -> None:
        self._conn._deliver(line)

    def close(self) -> None:
        if not self._conn._closed:
            self._conn._closed = True
            self._conn._inbound.put_nowait(None)


def connect_memory(server: LessonServer, model: NetModel | None = None,
                   rng: random.Random | None = None) -> MemoryConnection:
    model = model or NetModel()
    return MemoryConnection(server, model, rng or random.Random(model.seed))


__all__ = ["MemoryConnection", "NetModel", "connect_memory"]
