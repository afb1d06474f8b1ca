"""Survey analytics over the bundled reconstructed dataset and edge cases."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from veld.survey import (
    DuplicateResponse,
    InvalidRow,
    LikertResponse,
    Mode,
    NoData,
    UnpairedSubject,
    bundled_responses,
    bundled_subjects,
    dizzy_rate,
    paired_shift,
    parse_responses,
    preference_rate,
    summarize,
)


@pytest.fixture(scope="module")
def responses():
    return bundled_responses()


def test_bundled_dataset_shape(responses):
    assert len(responses) == 28  # 7 subjects x 2 modes x 2 questions
    assert {r.subject_id for r in responses} == {f"s{i}" for i in range(1, 8)}


def test_present_desktop_distribution(responses):
    summary = summarize(responses, "present", Mode.DESKTOP)
    assert summary.n == 7
    assert summary.proportions == {2: Fraction(2, 7), 3: Fraction(3, 7), 4: Fraction(2, 7)}
    assert sum(summary.proportions.values()) == 1
    assert [summary.label(r) for r in (2, 3, 4)] == ["0.29", "0.43", "0.29"]


def test_present_vr_unanimous(responses):
    summary = summarize(responses, "present", Mode.VR)
    assert summary.proportions == {4: Fraction(7, 7)}
    assert summary.label(4) == "1"


def test_enjoy_distributions(responses):
    desktop = summarize(responses, "enjoy", Mode.DESKTOP)
    vr = summarize(responses, "enjoy", Mode.VR)
    assert desktop.proportions == {3: Fraction(1, 7), 4: Fraction(6, 7)}
    assert vr.proportions == {4: Fraction(1, 7), 5: Fraction(6, 7)}
    assert [desktop.label(r) for r in (3, 4)] == ["0.14", "0.86"]
    assert [vr.label(r) for r in (4, 5)] == ["0.14", "0.86"]


def test_enjoy_shift_unanimously_positive(responses):
    shift = paired_shift(responses, "enjoy")
    assert len(shift.deltas) == 7
    assert all(d > 0 for d in shift.deltas.values())
    assert shift.positive == 7 and shift.zero == 0 and shift.negative == 0


def test_present_shift_never_negative(responses):
    shift = paired_shift(responses, "present")
    assert shift.negative == 0
    assert shift.positive + shift.zero == 7


def test_paired_shift_antisymmetric(responses):
    flipped = [
        LikertResponse(r.subject_id, Mode.VR if r.mode is Mode.DESKTOP else Mode.DESKTOP, r.question_id, r.rating)
        for r in responses
    ]
    original = paired_shift(responses, "enjoy").deltas
    mirrored = paired_shift(flipped, "enjoy").deltas
    assert {s: -d for s, d in original.items()} == mirrored


def test_summarize_permutation_invariant(responses):
    shuffled = list(responses)
    random.Random(3).shuffle(shuffled)
    assert summarize(shuffled, "present", Mode.DESKTOP) == summarize(responses, "present", Mode.DESKTOP)


def test_summarize_no_data():
    with pytest.raises(NoData):
        summarize([], "present", Mode.VR)
    with pytest.raises(NoData):
        summarize(bundled_responses(), "unasked", Mode.VR)


def test_unpaired_subject_rejected(responses):
    partial = [r for r in responses if not (r.subject_id == "s3" and r.mode is Mode.VR)]
    with pytest.raises(UnpairedSubject):
        paired_shift(partial, "present")


def test_identical_ratings_give_zero_delta():
    rows = [
        LikertResponse("x", Mode.DESKTOP, "q", 4),
        LikertResponse("x", Mode.VR, "q", 4),
    ]
    assert paired_shift(rows, "q").deltas == {"x": 0}


def test_preference_unanimous_in_bundle():
    subjects = bundled_subjects()
    assert len(subjects) == 7
    rate = preference_rate({sid: s["prefers"] for sid, s in subjects.items()})
    assert rate == Fraction(7, 7) == 1


def test_preference_rate_arithmetic_and_no_data():
    assert preference_rate({"a": Mode.VR, "b": Mode.DESKTOP}) == Fraction(1, 2)
    with pytest.raises(NoData):
        preference_rate({})


def test_dizzy_count_reconstructed_as_two_of_seven():
    assert dizzy_rate(bundled_subjects()) == Fraction(2, 7)


def test_rating_bounds_enforced():
    with pytest.raises(InvalidRow):
        LikertResponse("s", Mode.VR, "q", 6)
    with pytest.raises(InvalidRow):
        parse_responses([{"subject_id": "s", "mode": "vr", "question_id": "q", "rating": "0"}])
    with pytest.raises(InvalidRow):
        parse_responses([{"subject_id": "s", "mode": "hologram", "question_id": "q", "rating": "3"}])


def test_duplicate_response_rejected():
    rows = [
        {"subject_id": "s", "mode": "vr", "question_id": "q", "rating": "3"},
        {"subject_id": "s", "mode": "vr", "question_id": "q", "rating": "4"},
    ]
    with pytest.raises(DuplicateResponse):
        parse_responses(rows)
