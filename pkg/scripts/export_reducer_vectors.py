#!/usr/bin/env python3
"""Export reducer golden vectors for cross-implementation checks.

Each vector holds a canonical room-state dict, an action, and either the
resulting state dict plus its digest or the expected rejection code. The
browser client's reducer test replays these to prove behavioral identity
with the server reducer.

Usage: python scripts/export_reducer_vectors.py [--out frontend/tests/fixtures/reducer_vectors.json]
"""

from __future__ import annotations

import argparse
import json
import random

from veld.actions import ActionEnvelope, ReducerError
from veld.digest import state_digest
from veld.reducers import apply_action
from veld.state import FaceOffPhase, FaceOffState, RoomState, SlideShowState


def random_state(rng: random.Random) -> RoomState:
    occupants = frozenset(f"c{i}" for i in range(rng.randint(0, 5)))
    phase = rng.choice(list(FaceOffPhase))
    live = phase in (FaceOffPhase.PROMPT_SHOWN, FaceOffPhase.REVEALED)
    deck = rng.random() < 0.75
    return RoomState(
        room_id="r1",
        slides=SlideShowState(
            deck_id=f"deck-{rng.randint(1, 3)}" if deck else None,
            slide_index=rng.randint(0, 7) if deck else 0,
            deck_length=8 if deck else 0,
        ),
        faceoff=FaceOffState(
            phase=phase,
            round=rng.randint(1, 4) if live else 0,
            prompt_id=f"p{rng.randint(1, 6)}" if live else None,
            scores={cid: rng.randint(1, 3) for cid in occupants if rng.random() < 0.4},
        ),
        pods_locked=rng.random() < 0.5,
        occupants=occupants,
        group_assignment={cid: rng.choice("ab") for cid in occupants if rng.random() < 0.3},
    )


def random_action(rng: random.Random, state: RoomState) -> ActionEnvelope:
    occupants = sorted(state.occupants) or ["nobody"]
    pool = [
        ("slides", "SELECT_DECK", lambda: {"deck_id": f"d{rng.randint(1, 3)}", "deck_length": rng.randint(1, 9)}),
        ("slides", "SELECT_DECK", lambda: {"deck_id": "", "deck_length": 3}),
        ("slides", "NEXT_SLIDE", dict),
        ("slides", "PREV_SLIDE", dict),
        ("slides", "GOTO_SLIDE", lambda: {"index": rng.randint(0, 10)}),
        ("slides", "GOTO_SLIDE", lambda: {"index": -1}),
        ("faceoff", "NEXT_PROMPT", lambda: {"prompt_id": f"p{rng.randint(1, 5)}"}),
        ("faceoff", "REVEAL", dict),
        ("faceoff", "AWARD_POINT", lambda: {"student_id": rng.choice(occupants)}),
        ("faceoff", "AWARD_POINT", lambda: {"student_id": "ghost"}),
        ("faceoff", "RESET", dict),
        ("pods", "LOCK", dict),
        ("pods", "UNLOCK", dict),
        ("groups", "ASSIGN", lambda: {"assignment": {rng.choice(occupants): rng.choice("ab")}}),
        ("groups", "CLEAR", dict),
        ("slides", "BOGUS_KIND", dict),
        ("nosuchapp", "LOCK", dict),
    ]
    app, kind, payload_fn = rng.choice(pool)
    return ActionEnvelope("r1", app, "c1", kind, payload_fn(), client_ts=0, seq=1)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="frontend/tests/fixtures/reducer_vectors.json")
    parser.add_argument("--count", type=int, default=400)
    parser.add_argument("--seed", type=int, default=20240603)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    vectors = []
    for _ in range(args.count):
        state = random_state(rng)
        action = random_action(rng, state)
        entry = {
            "state": state.to_dict(),
            "action": {
                "seq": action.seq,
                "room": action.room_id,
                "app": action.app_id,
                "kind": action.kind,
                "payload": action.payload,
                "actor": action.actor_id,
            },
        }
        try:
            result = apply_action(state, action)
            entry["result"] = result.to_dict()
            entry["digest"] = state_digest(result)
        except ReducerError as err:
            entry["error"] = err.code
        vectors.append(entry)

    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump({"seed": args.seed, "vectors": vectors}, handle, indent=1)
    rejected = sum(1 for v in vectors if "error" in v)
    print(f"wrote {len(vectors)} vectors ({rejected} rejections) to {args.out}")


if __name__ == "__main__":
    main()
