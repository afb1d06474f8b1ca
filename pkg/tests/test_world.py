"""World config validation, round-trips, and teleport/portal/pod semantics."""

from __future__ import annotations

import asyncio
import json

import pytest

from veld.server.config import ServerConfig
from veld.server.core import LessonServer, SessionError
from veld.server.memory import connect_memory
from veld.harness.client import SimClient
from veld.world import (
    DanglingPortal,
    DuplicateName,
    InvalidBounds,
    InvalidCentral,
    InvalidPod,
    ParseError,
    SelfPortal,
    SpawnOutOfBounds,
    load_world,
    world_to_config,
)


def lesson(name, **overrides):
    base = {
        "name": name,
        "bounds": {"min": [-50, -10, -50], "max": [50, 10, 50]},
        "spawn": [0, 0, 0],
        "apps": ["slides", "faceoff"],
        "central": "slides",
        "pods": [],
        "portals": [],
        "decor": [],
    }
    base.update(overrides)
    return base


def world_text(*lessons, audio_zone=None):
    doc = {"lessons": list(lessons)}
    if audio_zone is not None:
        doc["audio_zone"] = audio_zone
    return json.dumps(doc)


def test_minimal_two_lesson_world_with_portal():
    world = load_world(world_text(
        lesson("a", portals=[{"position": [1, 0, 1], "target": "b"}]),
        lesson("b", portals=[{"position": [0, 0, 0], "target": "a"}]),
    ))
    assert set(world.lessons) == {"a", "b"}
    assert world.lessons["a"].portals[0].target == "b"


def test_dangling_portal_rejected():
    with pytest.raises(DanglingPortal):
        load_world(world_text(lesson("a", portals=[{"position": [0, 0, 0], "target": "ghost"}])))


def test_duplicate_lesson_name_rejected():
    with pytest.raises(DuplicateName):
        load_world(world_text(lesson("a"), lesson("a")))


def test_self_portal_rejected():
    with pytest.raises(SelfPortal):
        load_world(world_text(lesson("a", portals=[{"position": [0, 0, 0], "target": "a"}])))


def test_spawn_out_of_bounds_rejected():
    with pytest.raises(SpawnOutOfBounds):
        load_world(world_text(lesson("a", spawn=[999, 0, 0])))


def test_inverted_bounds_rejected():
    with pytest.raises(InvalidBounds):
        load_world(world_text(lesson("a", bounds={"min": [10, 0, 0], "max": [-10, 5, 5]})))


def test_central_must_be_listed_app():
    with pytest.raises(InvalidCentral):
        load_world(world_text(lesson("a", central="faceoff", apps=["slides"])))


def test_pod_validation():
    with pytest.raises(InvalidPod):
        load_world(world_text(lesson("a", pods=[{"id": "p", "center": [0, 0, 0], "radius": 0}])))
    with pytest.raises(InvalidPod):
        load_world(world_text(lesson("a", pods=[{"id": "p", "center": [999, 0, 0], "radius": 1}])))
    with pytest.raises(InvalidPod):
        load_world(world_text(
            lesson("a", pods=[{"id": "p", "center": [0, 0, 0], "radius": 1},
                              {"id": "p", "center": [1, 0, 0], "radius": 1}])))


def test_parse_errors():
    with pytest.raises(ParseError):
        load_world("{not json")
    with pytest.raises(ParseError):
        load_world(json.dumps({"lessons": "nope"}))
    with pytest.raises(ParseError):
        load_world(world_text({"name": "a"}))  # missing bounds


def test_world_round_trip():
    text = world_text(
        lesson(
            "island",
            pods=[{"id": "pod-1", "center": [3, 0, 3], "radius": 1.5}],
            portals=[{"position": [5, 0, 5], "target": "orientation"}],
            decor=[{"name": "fence", "position": [9, 0, 9]}],
        ),
        lesson("orientation"),
        audio_zone={"coef": 0.5, "ref_distance": 1.0, "epsilon": 0.015625},
    )
    world = load_world(text)
    again = load_world(json.dumps(world_to_config(world)))
    assert again == world


# --- teleport / portal / pods against a live server --------------------------

WORLD = json.loads(world_text(
    lesson(
        "island",
        pods=[{"id": "pod-1", "center": [0, 0, 0], "radius": 1.0},
              {"id": "pod-2", "center": [5, 0, 5], "radius": 2.0}],
        portals=[{"position": [2, 0, 0], "target": "orientation"}],
    ),
    lesson("orientation", spawn=[1, 0, 1], portals=[{"position": [1, 0, 1], "target": "island"}]),
))


def make_server():
    from veld.world import load_world as lw

    return LessonServer(ServerConfig(instructor_token="tok", presence_rate_hz=0.0), world=lw(json.dumps(WORLD)))


async def connected_client(server, name, token=None, room="island", binding="slides"):
    client = SimClient(connect_memory(server), name, token=token)
    await client.hello()
    await client.join(room, binding)
    return client


def test_teleport_moves_session_to_spawn():
    async def scenario():
        server = make_server()
        client = await connected_client(server, "ada", token="tok")
        session = server.sessions[client.client_id]
        assert session.position == (0.0, 0.0, 0.0)
        server.teleport(session, "orientation")
        assert session.room_id == "orientation"
        assert session.position == (1.0, 0.0, 1.0)
        # teleport to the current lesson resets to spawn
        session.position = (3.0, 0.0, 3.0)
        server.teleport(session, "orientation")
        assert session.position == (1.0, 0.0, 1.0)
        with pytest.raises(SessionError) as err:
            server.teleport(session, "ghost")
        assert err.value.code == "UNKNOWN_ROOM"
        await client.close()

    asyncio.run(scenario())


def test_portal_requires_proximity_and_chains_back():
    async def scenario():
        server = make_server()
        client = await connected_client(server, "ada", token="tok")
        session = server.sessions[client.client_id]
        portal = server.rooms["island"].lesson.portals[0]

        session.position = (12.0, 0.0, 0.0)  # 10 m away
        with pytest.raises(SessionError) as err:
            server.use_portal(session, portal)
        assert err.value.code == "TOO_FAR"

        session.position = (2.0, 0.0, 0.0)  # standing on it
        server.use_portal(session, portal)
        assert session.room_id == "orientation"
        assert session.position == (1.0, 0.0, 1.0)

        back = server.rooms["orientation"].lesson.portals[0]
        server.use_portal(session, back)  # spawn sits on the return portal
        assert session.room_id == "island"
        assert session.position == (0.0, 0.0, 0.0)
        await client.close()

    asyncio.run(scenario())


def test_assign_pods_validates_and_clamps_only_while_locked():
    async def scenario():
        server = make_server()
        instructor = await connected_client(server, "inst", token="tok")
        student = await connected_client(server, "stu")
        sid = student.client_id

        with pytest.raises(SessionError) as err:
            server.assign_pods("island", {sid: "nope"})
        assert err.value.code == "UNKNOWN_POD"
        with pytest.raises(SessionError) as err:
            server.assign_pods("island", {"ghost": "pod-1"})
        assert err.value.code == "UNKNOWN_STUDENT"

        server.assign_pods("island", {sid: "pod-1"})
        session = server.sessions[sid]

        # unlocked: pass-through
        student.send_pos(5.0, 0.0, 3.0)
        await student.wait_until(lambda: session.position == (5.0, 0.0, 3.0))

        # locked: clamped to the sphere surface
        await instructor.action("pods", "LOCK")
        student.send_pos(5.0, 0.0, 0.0)
        await student.wait_until(lambda: session.position == (1.0, 0.0, 0.0))

        # instructors are exempt
        inst_session = server.sessions[instructor.client_id]
        server.assign_pods("island", {instructor.client_id: "pod-1"})
        instructor.send_pos(5.0, 0.0, 0.0)
        await instructor.wait_until(lambda: inst_session.position == (5.0, 0.0, 0.0))

        # unlock: clamping ceases
        await instructor.action("pods", "UNLOCK")
        student.send_pos(7.0, 0.0, 0.0)
        await student.wait_until(lambda: session.position == (7.0, 0.0, 0.0))

        await instructor.close()
        await student.close()

    asyncio.run(scenario())
