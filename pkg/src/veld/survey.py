"""Likert survey ingestion and the desktop-vs-VR usability analysis.

Proportions are exact rationals (:class:`fractions.Fraction`), so k-of-n
distributions survive serialization and 2-decimal rendering reproduces the
published bar labels without float drift.

Input CSV: header ``subject_id,mode,question_id,rating`` with ratings 1..5
(1 = Strongly Disagree ... 5 = Strongly Agree) and mode ``desktop`` or ``vr``;
lines starting with ``#`` are comments. A subjects CSV
(``subject_id,prefers,felt_dizzy``) carries the per-subject preference and
dizziness flags.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from importlib import resources
from typing import Iterable, Mapping

RATING_MIN = 1
RATING_MAX = 5


class Mode(str, Enum):
    DESKTOP = "desktop"
    VR = "vr"


class SurveyError(ValueError):
    pass


class InvalidRow(SurveyError):
    pass


class DuplicateResponse(SurveyError):
    pass


class NoData(SurveyError):
    pass


class UnpairedSubject(SurveyError):
    pass


@dataclass(frozen=True)
class LikertResponse:
    subject_id: str
    mode: Mode
    question_id: str
    rating: int

    def __post_init__(self) -> None:
        if not (RATING_MIN <= self.rating <= RATING_MAX):
            raise InvalidRow(f"rating {self.rating} outside {RATING_MIN}..{RATING_MAX}")


@dataclass(frozen=True)
class DistributionSummary:
    question_id: str
    mode: Mode
    n: int
    counts: dict[int, int]

    @property
    def proportions(self) -> dict[int, Fraction]:
        return {rating: Fraction(count, self.n) for rating, count in self.counts.items()}

    def label(self, rating: int) -> str:
        """Bar label at 2-decimal rounding, trailing zeros trimmed (0.29, 1)."""
        value = self.proportions.get(rating, Fraction(0))
        return f"{float(value):.2f}".rstrip("0").rstrip(".") or "0"

    def to_dict(self) -> dict:
        return {
            "question": self.question_id,
            "mode": self.mode.value,
            "n": self.n,
            "counts": {str(r): c for r, c in sorted(self.counts.items())},
            # unreduced k-of-n pairs; Fraction would collapse 7/7 to 1/1
            "proportions": {str(r): [c, self.n] for r, c in sorted(self.counts.items())},
            "values": {str(r): c / self.n for r, c in sorted(self.counts.items())},
            "labels": {str(r): self.label(r) for r in sorted(self.counts)},
        }


def parse_responses(rows: Iterable[dict[str, str]]) -> list[LikertResponse]:
    responses: list[LikertResponse] = []
    seen: set[tuple[str, Mode, str]] = set()
    for i, row in enumerate(rows):
        try:
            subject = row["subject_id"].strip()
            mode = Mode(row["mode"].strip().lower())
            question = row["question_id"].strip()
            rating = int(row["rating"])
        except (KeyError, AttributeError, TypeError) as exc:
            raise InvalidRow(f"row {i + 1}: missing or malformed field ({exc})") from exc
        except ValueError as exc:
            raise InvalidRow(f"row {i + 1}: {exc}") from exc
        if not subject or not question:
            raise InvalidRow(f"row {i + 1}: empty subject_id or question_id")
        key = (subject, mode, question)
        if key in seen:
            raise DuplicateResponse(f"row {i + 1}: duplicate response {key}")
        seen.add(key)
        responses.append(LikertResponse(subject, mode, question, rating))
    return responses


def _read_csv(text: str) -> list[dict[str, str]]:
    lines = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def load_responses(path: str) -> list[LikertResponse]:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_responses(_read_csv(handle.read()))


def load_subjects(path: str) -> dict[str, dict]:
    with open(path, "r", encoding="utf-8") as handle:
        return _parse_subjects(handle.read())


def _parse_subjects(text: str) -> dict[str, dict]:
    subjects: dict[str, dict] = {}
    for i, row in enumerate(_read_csv(text)):
        try:
            subject = row["subject_id"].strip()
            prefers = Mode(row["prefers"].strip().lower())
            dizzy = row["felt_dizzy"].strip().lower() in {"true", "1", "yes"}
        except (KeyError, AttributeError, ValueError) as exc:
            raise InvalidRow(f"subjects row {i + 1}: {exc}") from exc
        if subject in subjects:
            raise DuplicateResponse(f"subjects row {i + 1}: duplicate subject '{subject}'")
        subjects[subject] = {"prefers": prefers, "felt_dizzy": dizzy}
    return subjects


def bundled_responses() -> list[LikertResponse]:
    text = resources.files("veld.data").joinpath("survey_responses.csv").read_text(encoding="utf-8")
    return parse_responses(_read_csv(text))


def bundled_subjects() -> dict[str, dict]:
    text = resources.files("veld.data").joinpath("subjects.csv").read_text(encoding="utf-8")
    return _parse_subjects(text)


def summarize(responses: Iterable[LikertResponse], question_id: str, mode: Mode) -> DistributionSummary:
    """Exact rating distribution among responses matching question and mode."""
    counts: dict[int, int] = {}
    for response in responses:
        if response.question_id == question_id and response.mode is mode:
            counts[response.rating] = counts.get(response.rating, 0) + 1
    n = sum(counts.values())
    if n == 0:
        raise NoData(f"no responses for question '{question_id}' in mode '{mode.value}'")
    return DistributionSummary(question_id=question_id, mode=mode, n=n, counts=counts)


@dataclass(frozen=True)
class PairedShift:
    """Per-subject VR minus Desktop rating deltas for one question."""

    question_id: str
    deltas: dict[str, int]

    @property
    def positive(self) -> int:
        return sum(1 for d in self.deltas.values() if d > 0)

    @property
    def zero(self) -> int:
        return sum(1 for d in self.deltas.values() if d == 0)

    @property
    def negative(self) -> int:
        return sum(1 for d in self.deltas.values() if d < 0)

    def to_dict(self) -> dict:
        return {
            "question": self.question_id,
            "deltas": dict(sorted(self.deltas.items())),
            "positive": self.positive,
            "zero": self.zero,
            "negative": self.negative,
        }


def paired_shift(responses: Iterable[LikertResponse], question_id: str) -> PairedShift:
    by_subject: dict[str, dict[Mode, int]] = {}
    for response in responses:
        if response.question_id == question_id:
            by_subject.setdefault(response.subject_id, {})[response.mode] = response.rating
    if not by_subject:
        raise NoData(f"no responses for question '{question_id}'")
    deltas: dict[str, int] = {}
    for subject, ratings in sorted(by_subject.items()):
        if Mode.DESKTOP not in ratings or Mode.VR not in ratings:
            missing = Mode.VR if Mode.VR not in ratings else Mode.DESKTOP
            raise UnpairedSubject(f"subject '{subject}' has no {missing.value} rating for '{question_id}'")
        deltas[subject] = ratings[Mode.VR] - ratings[Mode.DESKTOP]
    return PairedShift(question_id=question_id, deltas=deltas)


def preference_rate(preferences: Mapping[str, Mode]) -> Fraction:
    """Share of subjects preferring VR, as an exact rational."""
    if not preferences:
        raise NoData("no stated preferences")
    favoring = sum(1 for mode in preferences.values() if mode is Mode.VR)
    return Fraction(favoring, len(preferences))


def dizzy_rate(subjects: Mapping[str, dict]) -> Fraction:
    if not subjects:
        raise NoData("no subjects")
    return Fraction(sum(1 for s in subjects.values() if s["felt_dizzy"]), len(subjects))


__all__ = [
    "DistributionSummary",
    "DuplicateResponse",
    "InvalidRow",
    "LikertResponse",
    "Mode",
    "NoData",
    "PairedShift",
    "SurveyError",
    "UnpairedSubject",
    "bundled_responses",
    "bundled_subjects",
    "dizzy_rate",
    "load_responses",
    "load_subjects",
    "paired_shift",
    "parse_responses",
    "preference_rate",
    "summarize",
]
