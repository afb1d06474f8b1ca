"""WebSocket bridge for browser clients.

Same message vocabulary as the TCP front end; each WebSocket text frame
carries one JSON object (a trailing newline is tolerated either way). Served
on the sibling port so one server process speaks both transports.
"""

from __future__ import annotations

import asyncio
import logging

import websockets

from veld.server.core import LessonServer

log = logging.getLogger(__name__)


class WsTransport:
    def __init__(self, ws) -> None:
        self._ws = ws
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
                await self._ws.send(line)
        except Exception:
            pass
        finally:
            try:
                await self._ws.close()
            except Exception:
                pass


async def serve_ws(server: LessonServer, host: str = "127.0.0.1", port: int | None = None):
    """Start the bridge; returns the websockets server object."""
    if port is None:
        port = server.config.effective_ws_port

    async def handler(ws) -> None:
        transport = WsTransport(ws)
        ctx = server.connect(transport)
        try:
            async for frame in ws:
                text = frame.decode("utf-8", errors="replace") if isinstance(frame, bytes) else frame
                for line in text.splitlines():
                    if line.strip():
                        server.handle_line(ctx, line)
                if ctx.closed:
                    break
        except websockets.ConnectionClosed:
            pass
        finally:
            server.disconnect(ctx)
            transport.close()

    ws_server = await websockets.serve(handler, host, port)
    log.info("websocket bridge on ws://%s:%d", host, port)
    return ws_server


__all__ = ["WsTransport", "serve_ws"]
