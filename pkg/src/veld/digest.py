"""Canonical serialization and state digests.

The canonical form is UTF-8 JSON with lexicographically ordered keys and no
insignificant whitespace; the digest is the SHA-256 hex of those bytes. Equal
states (field by field) therefore always hash equal, no matter what insertion
order their maps were built in, and any implementation of the same scheme
(the browser client mirrors it) can cross-check convergence.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from veld.state import RoomState


def canonical_dumps(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest_value(value: Any) -> str:
    """SHA-256 hex digest of the canonical serialization of any plain value."""
    return hashlib.sha256(canonical_dumps(value).encode("utf-8")).hexdigest()


def state_digest(state: RoomState) -> str:
    return digest_value(state.to_dict())


def app_state_digest(state: RoomState, app_id: str) -> str:
    """Digest of a single app's sub-state (used by relevance checks)."""
    sub = state.app_state(app_id)
    return digest_value(sub.to_dict() if hasattr(sub, "to_dict") else sub)


def make_snapshot(state: RoomState, last_seq: int) -> dict[str, Any]:
    """Wire-shaped snapshot. A fresh client that loads it holds a state whose
    digest equals ``state_digest(state)`` and resumes the stream at
    ``last_seq + 1``."""
    return {"t": "SNAPSHOT", "room": state.room_id, "last_seq": last_seq, "state": state.to_dict()}


def state_from_snapshot(message: dict[str, Any]) -> tuple[RoomState, int]:
    return RoomState.from_dict(message["state"]), int(message["last_seq"])


__all__ = [
    "app_state_digest",
    "canonical_dumps",
    "digest_value",
    "make_snapshot",
    "state_digest",
    "state_from_snapshot",
]
