"""Distance attenuation of voice gain, per-listener gain matrices, and the
group-privacy radius.

Model: gain is 1 inside a reference distance ``d_ref`` (full-volume near-field
conversation, no singularity at d=0); beyond it, gain decays geometrically by
the attenuation coefficient ``a`` per doubling of distance::

    gain(d) = 1                      for d <= d_ref
    gain(d) = a ** log2(d / d_ref)   for d >  d_ref

``gain`` is computed by halving d back into (d_ref, 2*d_ref] and multiplying
by ``a`` once per halving, which makes the doubling law
``gain(2d) == a * gain(d)`` hold bit-exactly in floating point for d >= d_ref,
not just approximately.

Privacy: two groups cannot overhear each other when every cross-group gain is
at or below the audibility threshold ``epsilon``; the smallest separation that
guarantees this is ``privacy_radius = d_ref * 2 ** (log2(eps) / log2(a))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Vec3 = Sequence[float]


class NoPrivacy(Exception):
    """Raised when a = 1: gain never falls below the audibility threshold."""


@dataclass(frozen=True)
class AudioZone:
    """Attenuation parameters for one world or lesson area.

    ``coef`` (a) in (0, 1]; ``ref_distance`` (d_ref) > 0 meters; ``epsilon``
    in (0, 1) is the gain level treated as inaudible.
    """

    coef: float = 0.5
    ref_distance: float = 1.0
    epsilon: float = 1.0 / 64.0

    def __post_init__(self) -> None:
        if not (0.0 < self.coef <= 1.0):
            raise ValueError(f"coef must be in (0, 1], got {self.coef}")
        if not (self.ref_distance > 0.0):
            raise ValueError(f"ref_distance must be > 0, got {self.ref_distance}")
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")


def gain(zone: AudioZone, d: float) -> float:
    """Voice gain in [0, 1] heard at distance ``d`` meters (d >= 0)."""
    if d < 0.0 or not math.isfinite(d):
        raise ValueError(f"distance must be finite and >= 0, got {d}")
    if d <= zone.ref_distance:
        return 1.0
    # Halve back into (d_ref, 2*d_ref]; one factor of a per halving. The
    # multiplication order must stay innermost-first so the doubling law is
    # exact: gain(2d) runs the same loop once more around the same base value.
    doublings = 0
    while d > 2.0 * zone.ref_distance:
        d *= 0.5
        doublings += 1
    g = zone.coef ** math.log2(d / zone.ref_distance)
    for _ in range(doublings):
        g = zone.coef * g
    return g


def distance(p: Vec3, q: Vec3) -> float:
    return math.sqrt((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 + (p[2] - q[2]) ** 2)


@dataclass(frozen=True)
class GainMatrix:
    """Square listener x speaker gain matrix over a fixed client ordering.

    Symmetric (distance is), diagonal pinned to 0 (nobody monitors their own
    voice).
    """

    ids: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def entry(self, listener: str, speaker: str) -> float:
        return self.values[self.ids.index(listener)][self.ids.index(speaker)]


def gain_matrix(zone: AudioZone, positions: Mapping[str, Vec3]) -> GainMatrix:
    """Pairwise gains for every listener/speaker pair; ids are sorted so the
    matrix is deterministic regardless of input order."""
    ids = tuple(sorted(positions))
    for cid in ids:
        if not all(math.isfinite(c) for c in positions[cid]):
            raise ValueError(f"position of '{cid}' is not finite")
    n = len(ids)
    rows = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            g = gain(zone, distance(positions[ids[i]], positions[ids[j]]))
            rows[i][j] = g
            rows[j][i] = g
    return GainMatrix(ids=ids, values=tuple(tuple(row) for row in rows))


def privacy_radius(zone: AudioZone) -> float:
    """Smallest separation D with gain(D) <= epsilon; gain stays at or below
    epsilon for every distance beyond it."""
    if zone.coef >= 1.0:
        raise NoPrivacy("attenuation coefficient is 1; gain never falls below the threshold")
    return zone.ref_distance * 2.0 ** (math.log2(zone.epsilon) / math.log2(zone.coef))


@dataclass(frozen=True)
class GroupPrivacyReport:
    """Privacy verdict for one unordered pair of groups."""

    group_a: str
    group_b: str
    private: bool
    max_gain: float
    min_distance: float


def check_group_privacy(
    zone: AudioZone,
    groups: Mapping[str, str],
    positions: Mapping[str, Vec3],
) -> list[GroupPrivacyReport]:
    """Per-pair privacy report over every pair of distinct groups.

    A pair is private iff every cross-group speaker/listener gain is at or
    below the zone's epsilon. Raises :class:`NoPrivacy` when a = 1 (there are
    at least two groups but privacy is unattainable).
    """
    members: dict[str, list[str]] = {}
    for client_id in sorted(groups):
        if client_id not in positions:
            raise ValueError(f"grouped client '{client_id}' has no position")
        members.setdefault(groups[client_id], []).append(client_id)
    labels = sorted(members)
    if len(labels) >= 2 and zone.coef >= 1.0:
        raise NoPrivacy("attenuation coefficient is 1; groups can always hear each other")
    reports = []
    for i, la in enumerate(labels):
        for lb in labels[i + 1 :]:
            max_gain = 0.0
            min_dist = math.inf
            for ca in members[la]:
                for cb in members[lb]:
                    d = distance(positions[ca], positions[cb])
                    min_dist = min(min_dist, d)
                    max_gain = max(max_gain, gain(zone, d))
            reports.append(
                GroupPrivacyReport(
                    group_a=la,
                    group_b=lb,
                    private=max_gain <= zone.epsilon,
                    max_gain=max_gain,
                    min_distance=min_dist,
                )
            )
    return reports


__all__ = [
    "AudioZone",
    "GainMatrix",
    "GroupPrivacyReport",
    "NoPrivacy",
    "check_group_privacy",
    "distance",
    "gain",
    "gain_matrix",
    "privacy_radius",
]
