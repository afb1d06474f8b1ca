"""veld: server-authoritative shared state for multi-user virtual-classroom lessons.

The package is organized around a small replicated value, :class:`~veld.state.RoomState`,
mutated only by sequenced actions applied through a pure reducer. The sync server
assigns a total order per room and broadcasts accepted actions; every replica that
applies the same ordered action list converges to the same canonical digest.
"""

__version__ = "0.1.0"

from veld.actions import ActionEnvelope, DisplayBinding, Role, authorize, is_relevant
from veld.digest import canonical_dumps, make_snapshot, state_digest
from veld.reducers import apply_action
from veld.state import FaceOffPhase, FaceOffState, RoomState, SlideShowState, initial_room_state

__all__ = [
    "ActionEnvelope",
    "DisplayBinding",
    "FaceOffPhase",
    "FaceOffState",
    "Role",
    "RoomState",
    "SlideShowState",
    "apply_action",
    "authorize",
    "canonical_dumps",
    "initial_room_state",
    "is_relevant",
    "make_snapshot",
    "state_digest",
]
