"""asyncio TCP front end: one newline-delimited JSON object per line."""

from __future__ import annotations

import asyncio
import logging

from veld.server.core import LessonServer

log = logging.getLogger(__name__)

# Generous per-line cap; protocol messages are small.
MAX_LINE_BYTES = 1 << 20


class TcpTransport:
    """Per-connection outbound queue so one slow client never blocks the
    room writer; the sender task preserves per-connection FIFO order."""

    def __init__(self, writer: asyncio.StreamWriter):
        self._writer = writer
        self._queue: asyncio.Queue[str | None] = asyncio.Queue()
        self._task = asyncio.ensure_future(self._run())
        self._closed = False

    def send_line(self, line: str) -> None:
        if not self._closed:
            self._queue.put_nowait(line)

    def close(self) -> None:
        if not self._closed:
            self._closed = True
            self._queue.put_nowait(None)

    async def _run(self) -> None:
        try:
            while True:
                line = await self._queue.get()
                if line is None:
                    break
                self._writer.write(line.encode("utf-8") + b"\n")
                await self._writer.drain()
        except (ConnectionError, asyncio.CancelledError):
            pass
        finally:
            try:
                self._writer.close()
            except Exception:
                pass

    async def wait_closed(self) -> None:
        await self._task


async def serve_tcp(server: LessonServer, host: str = "127.0.0.1", port: int | None = None) -> asyncio.AbstractServer:
    """Start listening; returns the asyncio server (caller owns its lifetime)."""
    if port is None:
        port = server.config.listen_port

    async def on_client(reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        transport = TcpTransport(writer)
        ctx = server.connect(transport)
        try:
            while True:
                try:
                    raw = await reader.readline()
                except (ConnectionError, asyncio.LimitOverrunError, ValueError):
                    break
                if not raw:
                    break
                server.handle_line(ctx, raw.decode("utf-8", errors="replace"))
                if ctx.closed:
                    break
        finally:
            server.disconnect(ctx)
            transport.close()

    tcp_server = await asyncio.start_server(on_client, host, port, limit=MAX_LINE_BYTES)
    log.info("listening on %s:%d", host, port)
    return tcp_server


__all__ = ["MAX_LINE_BYTES", "TcpTransport", "serve_tcp"]
