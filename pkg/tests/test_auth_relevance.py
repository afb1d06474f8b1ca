"""Authorization and relevance predicates, plus their end-to-end properties."""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from veld.actions import ActionEnvelope, DisplayBinding, KINDS, ReducerError, Role, authorize, is_relevant
from veld.digest import app_state_digest, state_digest
from veld.reducers import apply_action
from veld.state import REGISTERED_APPS, RoomState


def act(app, kind, payload=None, actor="c1"):
    return ActionEnvelope(room_id="r1", app_id=app, actor_id=actor, kind=kind, payload=payload or {}, seq=1)


def test_instructor_accepted_for_every_registered_kind():
    for app, kinds in KINDS.items():
        for kind in kinds:
            assert authorize(Role.INSTRUCTOR, act(app, kind))


def test_student_rejected_for_every_registered_kind():
    for app, kinds in KINDS.items():
        for kind in kinds:
            assert not authorize(Role.STUDENT, act(app, kind))


def test_relevance_rules():
    assert is_relevant(act("slides", "NEXT_SLIDE"), DisplayBinding("slides"))
    assert not is_relevant(act("faceoff", "REVEAL"), DisplayBinding("slides"))
    assert is_relevant(act("pods", "LOCK"), DisplayBinding("slides"))
    assert is_relevant(act("groups", "CLEAR"), DisplayBinding("faceoff"))


# --- property scaffolding ----------------------------------------------------

BASE = RoomState(room_id="r1", occupants=frozenset({"i1", "s1", "s2"}))


def random_stream(rng: random.Random, length: int):
    """Mixed instructor/student action stream; payloads occasionally invalid
    so the rejected-path is exercised too."""
    stream = []
    for _ in range(length):
        actor_role = rng.choice([Role.INSTRUCTOR, Role.INSTRUCTOR, Role.STUDENT])
        actor = "i1" if actor_role is Role.INSTRUCTOR else rng.choice(["s1", "s2"])
        app = rng.choice(sorted(REGISTERED_APPS))
        kind = rng.choice(sorted(KINDS[app]))
        payload = {}
        if kind == "SELECT_DECK":
            payload = {"deck_id": f"d{rng.randint(1, 3)}", "deck_length": rng.randint(1, 9)}
        elif kind == "GOTO_SLIDE":
            payload = {"index": rng.randint(0, 12)}
        elif kind == "NEXT_PROMPT":
            payload = {"prompt_id": f"p{rng.randint(1, 5)}"}
        elif kind == "AWARD_POINT":
            payload = {"student_id": rng.choice(["s1", "s2", "ghost"])}
        elif kind == "ASSIGN":
            payload = {"assignment": {rng.choice(["s1", "s2"]): rng.choice("ab")}}
        stream.append((actor_role, ActionEnvelope("r1", app, actor, kind, payload)))
    return stream


def replay(stream):
    """Server-side pipeline: authorize, then apply; rejects change nothing
    and consume no seq."""
    state = BASE
    seq = 0
    applied = []
    for role, action in stream:
        if not authorize(role, action):
            continue
        try:
            state = apply_action(state, action.with_seq(seq + 1))
        except ReducerError:
            continue
        seq += 1
        applied.append(action.with_seq(seq))
    return state, applied


@given(st.integers(0, 2**32 - 1), st.integers(1, 60))
@settings(max_examples=200, deadline=None)
def test_authorization_safety(seed, length):
    """Filtering student actions through authorize leaves exactly the digest
    of the instructor-only substream."""
    stream = random_stream(random.Random(seed), length)
    filtered_state, _ = replay(stream)
    instructor_only = [(r, a) for r, a in stream if r is Role.INSTRUCTOR]
    instructor_state, _ = replay(instructor_only)
    assert state_digest(filtered_state) == state_digest(instructor_state)


@given(st.integers(0, 2**32 - 1), st.sampled_from(sorted(REGISTERED_APPS)))
@settings(max_examples=200, deadline=None)
def test_relevance_completeness(seed, binding_app):
    """A replica that skips irrelevant actions holds the same bound-app
    sub-state as a replica that applies everything."""
    stream = random_stream(random.Random(seed), 40)
    _, accepted = replay(stream)
    binding = DisplayBinding(binding_app)

    full = BASE
    filtered = BASE
    for action in accepted:
        full = apply_action(full, action)
        if is_relevant(action, binding):
            filtered = apply_action(filtered, action)

    assert app_state_digest(filtered, binding_app) == app_state_digest(full, binding_app)
    # Room-wide apps stay correct on the filtering replica as well.
    assert filtered.pods_locked == full.pods_locked
    assert filtered.group_assignment == full.group_assignment


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_order_determinism(seed):
    """Two replicas applying the same seq-ordered list end digest-equal."""
    stream = random_stream(random.Random(seed), 30)
    _, accepted = replay(stream)
    replica_a = BASE
    replica_b = BASE
    for action in accepted:
        replica_a = apply_action(replica_a, action)
    for action in accepted:
        replica_b = apply_action(replica_b, action)
    assert state_digest(replica_a) == state_digest(replica_b)
