"""Replicated room state shared by the server and every connected client.

A room carries one state per lesson app (the slide show and the Face Off game)
plus room-wide fields: the pod lock flag, the occupant roster, and the group
assignment used for audio privacy. Everything here is an immutable value;
reducers and occupancy helpers return fresh instances and never mutate inputs,
which is what makes replica convergence checkable by digest comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

SLIDES = "slides"
FACEOFF = "faceoff"
PODS = "pods"
GROUPS = "groups"

#: Apps whose actions affect every display regardless of binding.
ROOM_WIDE_APPS = frozenset({PODS, GROUPS})

#: Every room runs the same app registry.
REGISTERED_APPS = frozenset({SLIDES, FACEOFF, PODS, GROUPS})


class FaceOffPhase(str, Enum):
    LOBBY = "lobby"
    PROMPT_SHOWN = "prompt_shown"
    REVEALED = "revealed"
    FINISHED = "finished"


@dataclass(frozen=True)
class SlideShowState:
    """Current deck and slide. No deck selected means index 0 and length 0."""

    deck_id: str | None = None
    slide_index: int = 0
    deck_length: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "deck_id": self.deck_id,
            "slide_index": self.slide_index,
            "deck_length": self.deck_length,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SlideShowState:
        return cls(
            deck_id=data["deck_id"],
            slide_index=data["slide_index"],
            deck_length=data["deck_length"],
        )


@dataclass(frozen=True)
class FaceOffState:
    """Instructor-driven prompt/reveal/score loop.

    ``prompt_id`` is set exactly while a round is live (``PROMPT_SHOWN`` or
    ``REVEALED``); ``round`` counts prompts shown since the last reset.
    """

    phase: FaceOffPhase = FaceOffPhase.LOBBY
    round: int = 0
    prompt_id: str | None = None
    scores: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "phase": self.phase.value,
            "round": self.round,
            "prompt_id": self.prompt_id,
            "scores": dict(self.scores),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FaceOffState:
        return cls(
            phase=FaceOffPhase(data["phase"]),
            round=data["round"],
            prompt_id=data["prompt_id"],
            scores={str(k): int(v) for k, v in data["scores"].items()},
        )


@dataclass(frozen=True)
class RoomState:
    """Full shared state of one lesson room."""

    room_id: str
    slides: SlideShowState = field(default_factory=SlideShowState)
    faceoff: FaceOffState = field(default_factory=FaceOffState)
    pods_locked: bool = False
    occupants: frozenset[str] = frozenset()
    group_assignment: dict[str, str] = field(default_factory=dict)

    def app_state(self, app_id: str) -> Any:
        """State snapshot for one app id, room-wide apps included."""
        if app_id == SLIDES:
            return self.slides
        if app_id == FACEOFF:
            return self.faceoff
        if app_id == PODS:
            return self.pods_locked
        if app_id == GROUPS:
            return dict(self.group_assignment)
        raise KeyError(app_id)

    def to_dict(self) -> dict[str, Any]:
        """Plain-data form used for snapshots and canonical digests."""
        return {
            "apps": {
                FACEOFF: self.faceoff.to_dict(),
                SLIDES: self.slides.to_dict(),
            },
            "group_assignment": dict(self.group_assignment),
            "occupants": sorted(self.occupants),
            "pods_locked": self.pods_locked,
            "room_id": self.room_id,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RoomState:
        return cls(
            room_id=data["room_id"],
            slides=SlideShowState.from_dict(data["apps"][SLIDES]),
            faceoff=FaceOffState.from_dict(data["apps"][FACEOFF]),
            pods_locked=bool(data["pods_locked"]),
            occupants=frozenset(data["occupants"]),
            group_assignment={str(k): str(v) for k, v in data["group_assignment"].items()},
        )


def initial_room_state(room_id: str) -> RoomState:
    return RoomState(room_id=room_id)


def with_occupant(state: RoomState, client_id: str) -> RoomState:
    """Roster change on join. Idempotent, so presence replays are harmless."""
    return replace(state, occupants=state.occupants | {client_id})


def without_occupant(state: RoomState, client_id: str) -> RoomState:
    """Roster change on leave. Drops the client's group entry to keep the
    occupants-cover-assignment invariant; Face Off scores are retained as a
    historical record so a rejoining student keeps their points."""
    assignment = state.group_assignment
    if client_id in assignment:
        assignment = {k: v for k, v in assignment.items() if k != client_id}
    return replace(state, occupants=state.occupants - {client_id}, group_assignment=assignment)
