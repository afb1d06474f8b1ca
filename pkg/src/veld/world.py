"""Lesson-world registry: named lesson areas, portals, pods, and validation.

The world config is JSON::

    {"lessons": [{"name": str,
                  "bounds": {"min": [x,y,z], "max": [x,y,z]},
                  "spawn": [x,y,z],
                  "apps": [app_id, ...],
                  "central": app_id,
                  "pods": [{"id": str, "center": [x,y,z], "radius": num}, ...],
                  "portals": [{"position": [x,y,z], "target": lesson_name}, ...],
                  "decor": [{"name": str, "position": [x,y,z]}, ...]}, ...],
     "audio_zone": {"coef": num, "ref_distance": num, "epsilon": num}}

Each lesson becomes one sync-server room of the same name. Validation is
total; each config invariant maps to exactly one error:

* unparseable JSON or wrong shape -> :class:`ParseError`
* two lessons sharing a name -> :class:`DuplicateName`
* portal target not in the registry -> :class:`DanglingPortal`
* portal targeting its own lesson -> :class:`SelfPortal`
* spawn point outside the lesson bounds -> :class:`SpawnOutOfBounds`
* degenerate bounds (min > max on any axis) -> :class:`InvalidBounds`
* central display missing or not in the lesson's app list -> :class:`InvalidCentral`
* bad pod (radius <= 0, duplicate id, center out of bounds) -> :class:`InvalidPod`
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from veld.audio import AudioZone

Vec3 = tuple[float, float, float]

#: How close a user must stand to a portal to activate it, in meters.
DEFAULT_PORTAL_ACTIVATION_M = 1.5


class WorldError(ValueError):
    code = "WORLD"


class ParseError(WorldError):
    code = "PARSE"


class DuplicateName(WorldError):
    code = "DUPLICATE_NAME"


class DanglingPortal(WorldError):
    code = "DANGLING_PORTAL"


class SelfPortal(WorldError):
    code = "SELF_PORTAL"


class SpawnOutOfBounds(WorldError):
    code = "SPAWN_OUT_OF_BOUNDS"


class InvalidBounds(WorldError):
    code = "INVALID_BOUNDS"


class InvalidCentral(WorldError):
    code = "INVALID_CENTRAL"


class InvalidPod(WorldError):
    code = "INVALID_POD"


@dataclass(frozen=True)
class Box:
    """Axis-aligned bounding box in meters."""

    min: Vec3
    max: Vec3

    def contains(self, p: Vec3) -> bool:
        return all(self.min[i] <= p[i] <= self.max[i] for i in range(3))


@dataclass(frozen=True)
class Pod:
    pod_id: str
    center: Vec3
    radius: float


@dataclass(frozen=True)
class Portal:
    position: Vec3
    target: str


@dataclass(frozen=True)
class Decor:
    """Non-semantic dressing (guiding indicators, pathways): name and place only."""

    name: str
    position: Vec3


@dataclass(frozen=True)
class LessonModule:
    name: str
    bounds: Box
    spawn_point: Vec3
    apps: tuple[str, ...]
    central: str
    pods: tuple[Pod, ...] = ()
    portals: tuple[Portal, ...] = ()
    decor: tuple[Decor, ...] = ()

    def pod(self, pod_id: str) -> Pod | None:
        for pod in self.pods:
            if pod.pod_id == pod_id:
                return pod
        return None


@dataclass(frozen=True)
class World:
    lessons: dict[str, LessonModule] = field(default_factory=dict)
    audio_zone: AudioZone | None = None


def _vec3(value: Any, where: str) -> Vec3:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) and math.isfinite(c) for c in value)
    ):
        raise ParseError(f"{where}: expected a finite [x, y, z] triple")
    return (float(value[0]), float(value[1]), float(value[2]))


def _parse_lesson(entry: Any) -> LessonModule:
    if not isinstance(entry, dict) or not isinstance(entry.get("name"), str) or not entry["name"]:
        raise ParseError("lesson entries need a non-empty 'name'")
    name = entry["name"]
    bounds_raw = entry.get("bounds")
    if not isinstance(bounds_raw, dict):
        raise ParseError(f"lesson '{name}': missing bounds")
    bounds = Box(_vec3(bounds_raw.get("min"), f"lesson '{name}' bounds.min"),
                 _vec3(bounds_raw.get("max"), f"lesson '{name}' bounds.max"))
    if any(bounds.min[i] > bounds.max[i] for i in range(3)):
        raise InvalidBounds(f"lesson '{name}': bounds.min exceeds bounds.max")
    spawn = _vec3(entry.get("spawn"), f"lesson '{name}' spawn")
    if not bounds.contains(spawn):
        raise SpawnOutOfBounds(f"lesson '{name}': spawn point outside bounds")
    apps_raw = entry.get("apps")
    if not isinstance(apps_raw, list) or not apps_raw or not all(isinstance(a, str) for a in apps_raw):
        raise ParseError(f"lesson '{name}': 'apps' must be a non-empty list of app ids")
    central = entry.get("central")
    if not isinstance(central, str) or central not in apps_raw:
        raise InvalidCentral(f"lesson '{name}': 'central' must name one of its apps")

    pods: list[Pod] = []
    seen_pods: set[str] = set()
    for pod_raw in entry.get("pods", []):
        if not isinstance(pod_raw, dict) or not isinstance(pod_raw.get("id"), str) or not pod_raw["id"]:
            raise ParseError(f"lesson '{name}': pod entries need an 'id'")
        pod_id = pod_raw["id"]
        if pod_id in seen_pods:
            raise InvalidPod(f"lesson '{name}': duplicate pod id '{pod_id}'")
        seen_pods.add(pod_id)
        center = _vec3(pod_raw.get("center"), f"lesson '{name}' pod '{pod_id}' center")
        radius = pod_raw.get("radius")
        if not isinstance(radius, (int, float)) or isinstance(radius, bool) or not radius > 0:
            raise InvalidPod(f"lesson '{name}': pod '{pod_id}' radius must be > 0")
        if not bounds.contains(center):
            raise InvalidPod(f"lesson '{name}': pod '{pod_id}' center outside bounds")
        pods.append(Pod(pod_id=pod_id, center=center, radius=float(radius)))

    portals: list[Portal] = []
    for portal_raw in entry.get("portals", []):
        if not isinstance(portal_raw, dict) or not isinstance(portal_raw.get("target"), str):
            raise ParseError(f"lesson '{name}': portal entries need a 'target'")
        position = _vec3(portal_raw.get("position"), f"lesson '{name}' portal position")
        portals.append(Portal(position=position, target=portal_raw["target"]))

    decor: list[Decor] = []
    for decor_raw in entry.get("decor", []):
        if not isinstance(decor_raw, dict) or not isinstance(decor_raw.get("name"), str):
            raise ParseError(f"lesson '{name}': decor entries need a 'name'")
        decor.append(Decor(name=decor_raw["name"], position=_vec3(decor_raw.get("position"), f"lesson '{name}' decor position")))

    return LessonModule(
        name=name,
        bounds=bounds,
        spawn_point=spawn,
        apps=tuple(apps_raw),
        central=central,
        pods=tuple(pods),
        portals=tuple(portals),
        decor=tuple(decor),
    )


def load_world(config_text: str) -> World:
    """Parse and validate a world config; see the module docstring for the
    invariant-to-error mapping."""
    try:
        raw = json.loads(config_text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"world config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("lessons"), list):
        raise ParseError("world config must be an object with a 'lessons' list")

    lessons: dict[str, LessonModule] = {}
    for entry in raw["lessons"]:
        lesson = _parse_lesson(entry)
        if lesson.name in lessons:
            raise DuplicateName(f"lesson name '{lesson.name}' appears more than once")
        lessons[lesson.name] = lesson

    for lesson in lessons.values():
        for portal in lesson.portals:
            if portal.target == lesson.name:
                raise SelfPortal(f"lesson '{lesson.name}': portal targets its own lesson")
            if portal.target not in lessons:
                raise DanglingPortal(f"lesson '{lesson.name}': portal targets unknown lesson '{portal.target}'")

    zone = None
    if "audio_zone" in raw and raw["audio_zone"] is not None:
        zraw = raw["audio_zone"]
        if not isinstance(zraw, dict):
            raise ParseError("'audio_zone' must be an object")
        try:
            zone = AudioZone(
                coef=float(zraw.get("coef", 0.5)),
                ref_distance=float(zraw.get("ref_distance", 1.0)),
                epsilon=float(zraw.get("epsilon", 1.0 / 64.0)),
            )
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad audio_zone: {exc}") from exc
    return World(lessons=lessons, audio_zone=zone)


def load_world_file(path: str) -> World:
    with open(path, "r", encoding="utf-8") as handle:
        return load_world(handle.read())


def world_to_config(world: World) -> dict[str, Any]:
    """Inverse of :func:`load_world`; round-trips to an identical registry."""
    out: dict[str, Any] = {
        "lessons": [
            {
                "name": lesson.name,
                "bounds": {"min": list(lesson.bounds.min), "max": list(lesson.bounds.max)},
                "spawn": list(lesson.spawn_point),
                "apps": list(lesson.apps),
                "central": lesson.central,
                "pods": [{"id": p.pod_id, "center": list(p.center), "radius": p.radius} for p in lesson.pods],
                "portals": [{"position": list(p.position), "target": p.target} for p in lesson.portals],
                "decor": [{"name": d.name, "position": list(d.position)} for d in lesson.decor],
            }
            for lesson in world.lessons.values()
        ]
    }
    if world.audio_zone is not None:
        zone = world.audio_zone
        out["audio_zone"] = {"coef": zone.coef, "ref_distance": zone.ref_distance, "epsilon": zone.epsilon}
    return out


def single_lesson_world(
    name: str,
    *,
    half_extent: float = 1000.0,
    pods: tuple[Pod, ...] = (),
    audio_zone: AudioZone | None = None,
) -> World:
    """Convenience world with one large, empty lesson (bench runs, tests)."""
    lesson = LessonModule(
        name=name,
        bounds=Box((-half_extent,) * 3, (half_extent,) * 3),
        spawn_point=(0.0, 0.0, 0.0),
        apps=("slides", "faceoff"),
        central="slides",
        pods=pods,
    )
    return World(lessons={name: lesson}, audio_zone=audio_zone)


__all__ = [
    "Box",
    "DEFAULT_PORTAL_ACTIVATION_M",
    "DanglingPortal",
    "Decor",
    "DuplicateName",
    "InvalidBounds",
    "InvalidCentral",
    "InvalidPod",
    "LessonModule",
    "ParseError",
    "Pod",
    "Portal",
    "SelfPortal",
    "SpawnOutOfBounds",
    "World",
    "WorldError",
    "load_world",
    "load_world_file",
    "single_lesson_world",
    "world_to_config",
]
