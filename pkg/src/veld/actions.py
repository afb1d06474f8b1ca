"""Action envelopes, the per-app kind registry, and the gate predicates.

An action is the unit of replication: a named, payload-carrying mutation
command scoped to one room and one app. The server assigns ``seq`` when it
accepts an action; before acceptance ``seq`` is ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from veld.state import FACEOFF, GROUPS, PODS, REGISTERED_APPS, ROOM_WIDE_APPS, SLIDES


class Role(str, Enum):
    INSTRUCTOR = "instructor"
    STUDENT = "student"


@dataclass(frozen=True)
class ActionEnvelope:
    room_id: str
    app_id: str
    actor_id: str
    kind: str
    payload: dict[str, Any] = field(default_factory=dict)
    client_ts: int = 0
    seq: int | None = None

    def with_seq(self, seq: int) -> ActionEnvelope:
        return replace(self, seq=seq)


@dataclass(frozen=True)
class DisplayBinding:
    """The app a client's display is currently showing."""

    app_id: str


class ReducerError(Exception):
    """Base for action rejections. ``code`` doubles as the wire error code."""

    code = "REDUCER_ERROR"

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail


class UnknownKind(ReducerError):
    code = "UNKNOWN_KIND"


class InvalidPayload(ReducerError):
    code = "INVALID_PAYLOAD"


class IllegalTransition(ReducerError):
    code = "ILLEGAL_TRANSITION"


#: Fixed kind vocabulary per app. Unknown kinds are rejected, never ignored.
KINDS: dict[str, frozenset[str]] = {
    SLIDES: frozenset({"SELECT_DECK", "NEXT_SLIDE", "PREV_SLIDE", "GOTO_SLIDE"}),
    FACEOFF: frozenset({"NEXT_PROMPT", "REVEAL", "AWARD_POINT", "RESET"}),
    PODS: frozenset({"LOCK", "UNLOCK"}),
    GROUPS: frozenset({"ASSIGN", "CLEAR"}),
}


def is_registered(app_id: str, kind: str) -> bool:
    return kind in KINDS.get(app_id, frozenset())


def authorize(role: Role, action: ActionEnvelope) -> bool:
    """Only instructors may mutate shared state.

    Every registered kind is a mutation, so the rule collapses to a role
    check; it is total over well-formed actions.
    """
    return role is Role.INSTRUCTOR


def is_relevant(action: ActionEnvelope, binding: DisplayBinding) -> bool:
    """Whether a display bound to ``binding`` must react to ``action``.

    Room-wide apps (pods, groups) affect every display; otherwise only the
    bound app's actions are relevant.
    """
    return action.app_id == binding.app_id or action.app_id in ROOM_WIDE_APPS


__all__ = [
    "ActionEnvelope",
    "DisplayBinding",
    "IllegalTransition",
    "InvalidPayload",
    "KINDS",
    "ReducerError",
    "Role",
    "UnknownKind",
    "authorize",
    "is_registered",
    "is_relevant",
]
