"""Scenario driver: N concurrent protocol clients against one room.

Instructors issue a seeded action script while every client streams position
updates; after quiescence (all acks in, every client caught up to the final
seq, plus a settle window of twice the base latency) the run collects mirror
digests and network metrics.

Scripted actions are drawn from kinds that are legal in *any* room state
(deck selection, slide navigation once the issuing instructor's own first
``SELECT_DECK`` is acked, pod lock/unlock, group assignment, next-prompt), so
every submission is accepted regardless of how concurrent instructors
interleave, and the fan-out law ``delivered_events == M * (N - 1)`` is exact.
"""

from __future__ import annotations

import asyncio
import random
import time
from dataclasses import dataclass, field
from typing import Any

from veld.harness.client import SimClient, TcpClientConnection
from veld.harness.report import LatencySummary, MetricsReport, verify_convergence
from veld.server.config import ServerConfig
from veld.server.core import LessonServer
from veld.server.memory import NetModel, connect_memory
from veld.server.tcp import serve_tcp
from veld.world import single_lesson_world

MAX_CLIENTS = 150


class ConnectFailure(Exception):
    pass


class ScenarioTimeout(Exception):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    n_clients: int
    n_instructors: int = 1
    action_count: int = 0
    #: Combined instructor submission rate in actions/s; 0 means "as fast as
    #: possible".
    action_rate: float = 0.0
    #: Position updates/s sent by every client; 0 disables presence traffic.
    presence_rate: float = 0.0
    #: Cap on the run; quiescence must be reached within duration_s + grace.
    duration_s: float = 60.0
    net_model: NetModel = field(default_factory=NetModel)

    def __post_init__(self) -> None:
        if not (1 <= self.n_clients <= MAX_CLIENTS):
            raise ValueError(f"n_clients must be in 1..{MAX_CLIENTS}")
        if not (1 <= self.n_instructors <= self.n_clients):
            raise ValueError("n_instructors must be in 1..n_clients")
        if self.action_count < 0 or self.action_rate < 0 or self.presence_rate < 0:
            raise ValueError("counts and rates must be >= 0")
        if self.duration_s <= 0:
            raise ValueError("duration_s must be > 0")


def build_scripts(
    config: ScenarioConfig, client_ids: list[str], rng: random.Random
) -> list[list[tuple[str, str, dict[str, Any]]]]:
    """Seeded per-instructor action scripts, ``action_count`` actions total."""
    m, k = config.action_count, config.n_instructors
    counts = [m // k + (1 if i < m % k else 0) for i in range(k)]

    def safe_action(i: int) -> tuple[str, str, dict[str, Any]]:
        choice = rng.randrange(9)
        if choice == 0:
            return ("slides", "SELECT_DECK", {"deck_id": f"deck-{rng.randrange(100)}", "deck_length": rng.randint(5, 20)})
        if choice == 1:
            return ("slides", "NEXT_SLIDE", {})
        if choice == 2:
            return ("slides", "PREV_SLIDE", {})
        if choice == 3:
            return ("slides", "GOTO_SLIDE", {"index": rng.randrange(5)})
        if choice == 4:
            return ("pods", "LOCK", {})
        if choice == 5:
            return ("pods", "UNLOCK", {})
        if choice == 6:
            labels = ["alpha", "beta", "gamma"]
            grouped = rng.sample(client_ids, k=min(len(client_ids), rng.randint(1, 4)))
            return ("groups", "ASSIGN", {"assignment": {cid: rng.choice(labels) for cid in grouped}})
        if choice == 7:
            return ("groups", "CLEAR", {})
        return ("faceoff", "NEXT_PROMPT", {"prompt_id": f"p{rng.randrange(1000)}"})

    scripts = []
    for i, count in enumerate(counts):
        script: list[tuple[str, str, dict[str, Any]]] = []
        if count > 0:
            # The issuing instructor waits for this ack before navigating, so
            # every later slide action finds a deck no matter the interleaving.
            script.append(("slides", "SELECT_DECK", {"deck_id": f"deck-i{i}", "deck_length": rng.randint(8, 16)}))
            script.extend(safe_action(i) for _ in range(count - 1))
        scripts.append(script)
    return scripts


async def _instructor_loop(client: SimClient, script, interval: float) -> None:
    if not script:
        return
    app, kind, payload = script[0]
    await client.action(app, kind, payload)
    for app, kind, payload in script[1:]:
        if interval > 0:
            await asyncio.sleep(interval)
        client.send_action(app, kind, payload)


async def _presence_loop(client: SimClient, rate: float, rng: random.Random, stop: asyncio.Event) -> None:
    if rate <= 0:
        return
    x, y, z = 0.0, 0.0, 0.0
    interval = 1.0 / rate
    while not stop.is_set():
        x += rng.uniform(-0.5, 0.5)
        y += rng.uniform(-0.5, 0.5)
        z += rng.uniform(-0.5, 0.5)
        client.send_pos(x, y, z)
        try:
            await asyncio.wait_for(stop.wait(), timeout=interval)
        except asyncio.TimeoutError:
            pass


async def run_scenario_async(
    config: ScenarioConfig,
    *,
    server: LessonServer | None = None,
    endpoint: str | None = None,
    in_memory: bool = True,
    room: str = "bench",
    instructor_token: str | None = None,
    grace_s: float = 15.0,
) -> MetricsReport:
    """Run one scenario and return its metrics report.

    Transport selection: ``endpoint`` ("host:port") drives an external server
    over TCP (pass that server's ``instructor_token``); otherwise a local
    server is used — over in-memory connections when ``in_memory`` is set
    (the deterministic CI path), else over a real loopback socket.
    """
    deadline = config.duration_s + grace_s
    own_server: LessonServer | None = None
    tcp_server = None
    host, port = None, None

    if endpoint is not None:
        host, _, port_text = endpoint.partition(":")
        port = int(port_text)
    else:
        if server is None:
            server_config = ServerConfig(instructor_token="bench-token", max_clients=MAX_CLIENTS)
            server = own_server = LessonServer(server_config, world=single_lesson_world(room))
        if not in_memory:
            tcp_server = await serve_tcp(server, "127.0.0.1", 0)
            host = "127.0.0.1"
            port = tcp_server.sockets[0].getsockname()[1]

    rng = random.Random(config.net_model.seed)
    clients: list[SimClient] = []
    started = time.monotonic()
    if instructor_token is None:
        instructor_token = server.config.instructor_token if server is not None else "bench-token"

    async def open_client(index: int) -> SimClient:
        name = f"sim-{index}"
        token = instructor_token if index < config.n_instructors else None
        if host is not None:
            try:
                conn = await TcpClientConnection.open(host, port)
            except OSError as exc:
                raise ConnectFailure(f"cannot reach {host}:{port}: {exc}") from exc
        else:
            conn = connect_memory(server, config.net_model, rng=random.Random(config.net_model.seed * 7919 + index))
        client = SimClient(conn, name, token=token)
        await client.hello()
        await client.join(room, binding="slides")
        return client

    try:
        # Sequential joins keep client ids and the roster deterministic.
        for i in range(config.n_clients):
            clients.append(await open_client(i))

        instructors = clients[: config.n_instructors]
        client_ids = [c.client_id for c in clients if c.client_id is not None]
        scripts = build_scripts(config, client_ids, random.Random(config.net_model.seed))
        interval = config.n_instructors / config.action_rate if config.action_rate > 0 else 0.0

        stop_presence = asyncio.Event()
        presence_tasks = [
            asyncio.ensure_future(
                _presence_loop(c, config.presence_rate, random.Random(config.net_model.seed * 31 + i), stop_presence)
            )
            for i, c in enumerate(clients)
        ]
        instructor_tasks = [
            asyncio.ensure_future(_instructor_loop(c, script, interval))
            for c, script in zip(instructors, scripts)
        ]

        try:
            if instructor_tasks:
                await asyncio.wait_for(asyncio.gather(*instructor_tasks), timeout=deadline)
            if config.action_count == 0 and config.presence_rate > 0:
                await asyncio.sleep(min(config.duration_s, deadline))
            # Quiescence: every ack in, every client caught up to the last seq.
            final_seq = config.action_count
            for instructor, script in zip(instructors, scripts):
                await instructor.wait_until(lambda c=instructor, n=len(script): c.acks_received >= n, timeout=deadline)
            for client in clients:
                await client.wait_for_seq(final_seq, timeout=deadline)
        except asyncio.TimeoutError as exc:
            raise ScenarioTimeout(f"quiescence not reached within {deadline:.1f}s") from exc
        finally:
            stop_presence.set()
            for task in presence_tasks:
                await task

        await asyncio.sleep(max(2 * config.net_model.base_latency_ms / 1000.0, 0.05))

        # -- collect ---------------------------------------------------------
        digests = [c.digest() for c in clients]
        if server is not None:
            digests.append(server.room_digest(room))
        converged = verify_convergence(digests)

        send_times: dict[int, float] = {}
        for instructor in instructors:
            send_times.update(instructor.send_times)
        samples = [
            (applied - send_times[seq]) * 1000.0
            for client in clients
            for seq, applied in client.apply_times.items()
            if seq in send_times
        ]
        duration = time.monotonic() - started
        per_client_gap = {c.client_id or c.name: c.max_seq_gap for c in clients}
        return MetricsReport(
            n_clients=config.n_clients,
            n_instructors=config.n_instructors,
            action_count=config.action_count,
            delivered_events=sum(c.events_received for c in clients),
            acks=sum(c.acks_received for c in clients),
            action_latency_ms=LatencySummary.from_samples(samples) if samples else None,
            converged=converged,
            digest=digests[0] if converged else None,
            msgs_per_second=sum(c.messages_received for c in clients) / duration if duration > 0 else 0.0,
            max_seq_gap=max(per_client_gap.values(), default=0),
            per_client_max_seq_gap=per_client_gap,
            duration_s=duration,
        )
    finally:
        for client in clients:
            await client.close()
        if tcp_server is not None:
            tcp_server.close()
            await tcp_server.wait_closed()
        if own_server is not None:
            pass  # nothing to tear down; the in-memory server has no sockets


def run_scenario(config: ScenarioConfig, **kwargs: Any) -> MetricsReport:
    return asyncio.run(run_scenario_async(config, **kwargs))


__all__ = [
    "ConnectFailure",
    "ScenarioConfig",
    "ScenarioTimeout",
    "build_scripts",
    "run_scenario",
    "run_scenario_async",
]
