"""Pure reducers: ``(RoomState, ActionEnvelope) -> RoomState``.

Identical reducers on every replica, applied in the server's per-room seq
order, guarantee convergence. A rejected action raises a
:class:`~veld.actions.ReducerError` subclass and leaves the input state
untouched (callers report the error to the actor only).

Kind vocabulary and effects:

* ``slides``: ``SELECT_DECK{deck_id, deck_length}`` picks a deck and rewinds
  to slide 0; ``NEXT_SLIDE``/``PREV_SLIDE`` step by one; ``GOTO_SLIDE{index}``
  jumps. Navigation clamps at the deck edges rather than wrapping.
* ``faceoff``: ``NEXT_PROMPT{prompt_id}`` starts round n+1; ``REVEAL`` flips
  the live prompt; ``AWARD_POINT{student_id}`` adds one point after a reveal;
  ``RESET`` returns to the lobby and clears scores. The ``FINISHED`` phase is
  accepted as input (only ``RESET`` is legal there) but no registered kind
  produces it.
* ``pods``: ``LOCK``/``UNLOCK`` set the room-wide flag; both are idempotent.
* ``groups``: ``ASSIGN{assignment}`` replaces the whole client->label map
  (keys must be current occupants); ``CLEAR`` empties it.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Any

from veld.actions import (
    ActionEnvelope,
    IllegalTransition,
    InvalidPayload,
    UnknownKind,
    is_registered,
)
from veld.state import FACEOFF, GROUPS, PODS, SLIDES, FaceOffPhase, FaceOffState, RoomState, SlideShowState


def apply_action(state: RoomState, action: ActionEnvelope) -> RoomState:
    """Apply one server-accepted action. Pure: same inputs, same output."""
    if action.seq is None:
        raise ValueError("apply_action requires a server-assigned seq")
    if not is_registered(action.app_id, action.kind):
        raise UnknownKind(f"{action.app_id}/{action.kind} is not a registered action kind")
    if action.app_id == SLIDES:
        return replace(state, slides=_apply_slides(state.slides, action.kind, action.payload))
    if action.app_id == FACEOFF:
        return replace(state, faceoff=_apply_faceoff(state, action.kind, action.payload))
    if action.app_id == PODS:
        return replace(state, pods_locked=(action.kind == "LOCK"))
    if action.app_id == GROUPS:
        return replace(state, group_assignment=_apply_groups(state, action.kind, action.payload))
    raise UnknownKind(action.app_id)  # unreachable; is_registered covers it


def _require_str(payload: dict[str, Any], key: str) -> str:
    value = payload.get(key)
    if not isinstance(value, str) or not value:
        raise InvalidPayload(f"'{key}' must be a non-empty string")
    return value


def _require_int(payload: dict[str, Any], key: str, minimum: int) -> int:
    value = payload.get(key)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InvalidPayload(f"'{key}' must be an integer >= {minimum}")
    return value


def _apply_slides(slides: SlideShowState, kind: str, payload: dict[str, Any]) -> SlideShowState:
    if kind == "SELECT_DECK":
        deck_id = _require_str(payload, "deck_id")
        deck_length = _require_int(payload, "deck_length", 1)
        return SlideShowState(deck_id=deck_id, slide_index=0, deck_length=deck_length)
    # All navigation kinds need a selected deck.
    if slides.deck_id is None:
        raise IllegalTransition(f"{kind} with no deck selected")
    last = slides.deck_length - 1
    if kind == "NEXT_SLIDE":
        return replace(slides, slide_index=min(slides.slide_index + 1, last))
    if kind == "PREV_SLIDE":
        return replace(slides, slide_index=max(slides.slide_index - 1, 0))
    if kind == "GOTO_SLIDE":
        index = _require_int(payload, "index", 0)
        return replace(slides, slide_index=max(0, min(index, last)))
    raise UnknownKind(kind)


def _apply_faceoff(state: RoomState, kind: str, payload: dict[str, Any]) -> FaceOffState:
    game = state.faceoff
    if kind == "NEXT_PROMPT":
        prompt_id = _require_str(payload, "prompt_id")
        if game.phase is FaceOffPhase.FINISHED:
            raise IllegalTransition("NEXT_PROMPT after the game finished")
        return replace(game, phase=FaceOffPhase.PROMPT_SHOWN, round=game.round + 1, prompt_id=prompt_id)
    if kind == "REVEAL":
        if game.phase is not FaceOffPhase.PROMPT_SHOWN:
            raise IllegalTransition(f"REVEAL while in {game.phase.value}")
        return replace(game, phase=FaceOffPhase.REVEALED)
    if kind == "AWARD_POINT":
        student_id = _require_str(payload, "student_id")
        if game.phase is not FaceOffPhase.REVEALED:
            raise IllegalTransition(f"AWARD_POINT while in {game.phase.value}")
        if student_id not in state.occupants:
            raise InvalidPayload(f"unknown student '{student_id}'")
        scores = dict(game.scores)
        scores[student_id] = scores.get(student_id, 0) + 1
        return replace(game, scores=scores)
    if kind == "RESET":
        return FaceOffState()
    raise UnknownKind(kind)


def _apply_groups(state: RoomState, kind: str, payload: dict[str, Any]) -> dict[str, str]:
    if kind == "CLEAR":
        return {}
    assignment = payload.get("assignment")
    if not isinstance(assignment, dict):
        raise InvalidPayload("'assignment' must be a client->label map")
    cleaned: dict[str, str] = {}
    for client_id, label in assignment.items():
        if not isinstance(client_id, str) or not isinstance(label, str) or not label:
            raise InvalidPayload("assignment entries must map client ids to non-empty labels")
        if client_id not in state.occupants:
            raise InvalidPayload(f"'{client_id}' is not an occupant of the room")
        cleaned[client_id] = label
    return cleaned


__all__ = ["apply_action"]
