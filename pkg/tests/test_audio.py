"""Attenuation model: closed-form values, exact doubling law, matrices,
privacy radius, and the brute-force group-privacy oracle."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_privacy
from veld.audio import (
    AudioZone,
    NoPrivacy,
    check_group_privacy,
    gain,
    gain_matrix,
    privacy_radius,
)

HALF = AudioZone(coef=0.5, ref_distance=1.0, epsilon=1 / 64)


def test_gain_at_reference_distance_is_one():
    assert gain(HALF, 1.0) == 1.0
    assert gain(HALF, 0.0) == 1.0
    assert gain(HALF, 0.3) == 1.0


def test_gain_one_doubling_multiplies_by_coef():
    assert gain(HALF, 2.0) == 0.5


def test_gain_three_doublings_closed_form():
    # a^3 cross-checked by cascading three doublings from the reference.
    cascaded = 0.5 * (0.5 * (0.5 * gain(HALF, 1.0)))
    assert gain(HALF, 8.0) == pytest.approx(0.125, abs=0)
    assert gain(HALF, 8.0) == cascaded


def test_no_attenuation_when_coef_is_one():
    zone = AudioZone(coef=1.0, ref_distance=2.0, epsilon=0.5)
    for d in (0.0, 1.0, 2.0, 7.3, 1000.0):
        assert gain(zone, d) == 1.0


def test_gain_rejects_bad_distance():
    with pytest.raises(ValueError):
        gain(HALF, -1.0)
    with pytest.raises(ValueError):
        gain(HALF, math.inf)


def test_zone_parameter_validation():
    with pytest.raises(ValueError):
        AudioZone(coef=0.0)
    with pytest.raises(ValueError):
        AudioZone(coef=1.5)
    with pytest.raises(ValueError):
        AudioZone(ref_distance=0.0)
    with pytest.raises(ValueError):
        AudioZone(epsilon=1.0)


@given(
    st.floats(0.05, 1.0, exclude_max=False),
    st.floats(0.01, 100.0),
    st.floats(0.0, 1e6),
    st.floats(0.0, 1e6),
)
@settings(max_examples=500)
def test_gain_monotone_nonincreasing(coef, ref, d1, d2):
    zone = AudioZone(coef=coef, ref_distance=ref, epsilon=0.01)
    lo, hi = sorted((d1, d2))
    assert gain(zone, lo) >= gain(zone, hi)


def test_doubling_law_exact_10k_samples():
    rng = random.Random(2024)
    for _ in range(10_000):
        zone = AudioZone(coef=rng.uniform(0.05, 0.999), ref_distance=rng.uniform(0.01, 50.0), epsilon=0.01)
        d = zone.ref_distance * rng.uniform(1.0, 1e5)
        assert gain(zone, 2 * d) == zone.coef * gain(zone, d)


def test_gain_matrix_small_line():
    positions = {"a": (0.0, 0.0, 0.0), "b": (2.0, 0.0, 0.0), "c": (4.0, 0.0, 0.0)}
    matrix = gain_matrix(HALF, positions)
    assert matrix.ids == ("a", "b", "c")
    assert matrix.entry("a", "b") == 0.5
    assert matrix.entry("b", "c") == 0.5
    assert matrix.entry("a", "c") == 0.25
    for cid in matrix.ids:
        assert matrix.entry(cid, cid) == 0.0


def test_gain_matrix_coincident_clients_full_volume():
    matrix = gain_matrix(HALF, {"a": (1.0, 2.0, 3.0), "b": (1.0, 2.0, 3.0)})
    assert matrix.entry("a", "b") == 1.0
    assert matrix.entry("b", "a") == 1.0


def test_gain_matrix_no_attenuation_zone():
    zone = AudioZone(coef=1.0)
    rng = random.Random(5)
    positions = {f"c{i}": (rng.uniform(-50, 50), 0.0, rng.uniform(-50, 50)) for i in range(6)}
    matrix = gain_matrix(zone, positions)
    for i, a in enumerate(matrix.ids):
        for j, b in enumerate(matrix.ids):
            assert matrix.values[i][j] == (0.0 if i == j else 1.0)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100)
def test_gain_matrix_symmetric_and_bounded(seed):
    rng = random.Random(seed)
    zone = AudioZone(coef=rng.uniform(0.1, 1.0), ref_distance=rng.uniform(0.1, 5.0), epsilon=0.01)
    positions = {f"c{i}": (rng.uniform(-30, 30), rng.uniform(-5, 5), rng.uniform(-30, 30)) for i in range(rng.randint(1, 8))}
    matrix = gain_matrix(zone, positions)
    n = len(matrix.ids)
    for i in range(n):
        assert matrix.values[i][i] == 0.0
        for j in range(n):
            assert 0.0 <= matrix.values[i][j] <= 1.0
            assert matrix.values[i][j] == matrix.values[j][i]


def test_privacy_radius_exact_64m():
    assert privacy_radius(AudioZone(coef=0.5, ref_distance=1.0, epsilon=1 / 64)) == 64.0


def test_privacy_radius_one_doubling():
    assert privacy_radius(AudioZone(coef=0.5, ref_distance=2.0, epsilon=0.5)) == 4.0


def test_privacy_radius_unattainable_at_coef_one():
    with pytest.raises(NoPrivacy):
        privacy_radius(AudioZone(coef=1.0))


@given(st.floats(0.05, 0.95), st.floats(0.01, 20.0), st.floats(0.001, 0.5))
@settings(max_examples=300)
def test_gain_at_and_beyond_privacy_radius_is_inaudible(coef, ref, epsilon):
    zone = AudioZone(coef=coef, ref_distance=ref, epsilon=epsilon)
    radius = privacy_radius(zone)
    # tiny multiplicative slack: the radius itself may round a half-ulp above
    assert gain(zone, radius) <= epsilon * (1 + 1e-9)
    for factor in (1.001, 2.0, 10.0):
        assert gain(zone, radius * factor) <= epsilon


def test_group_privacy_singletons_far_apart():
    groups = {"a": "g1", "b": "g2"}
    positions = {"a": (0.0, 0.0, 0.0), "b": (100.0, 0.0, 0.0)}
    (report,) = check_group_privacy(HALF, groups, positions)
    assert report.private
    assert report.min_distance == 100.0


def test_group_privacy_too_close():
    groups = {"a": "g1", "b": "g2"}
    positions = {"a": (0.0, 0.0, 0.0), "b": (32.0, 0.0, 0.0)}
    (report,) = check_group_privacy(HALF, groups, positions)
    assert not report.private
    assert report.max_gain == gain(HALF, 32.0) == 1 / 32


def test_group_privacy_single_group_empty_report():
    assert check_group_privacy(HALF, {"a": "g1", "b": "g1"}, {"a": (0, 0, 0), "b": (1, 1, 1)}) == []


def test_group_privacy_propagates_no_privacy():
    zone = AudioZone(coef=1.0)
    with pytest.raises(NoPrivacy):
        check_group_privacy(zone, {"a": "g1", "b": "g2"}, {"a": (0, 0, 0), "b": (9, 9, 9)})


def test_group_privacy_matches_brute_force_100_instances():
    rng = random.Random(99)
    for _ in range(100):
        zone = AudioZone(coef=rng.uniform(0.2, 0.95), ref_distance=rng.uniform(0.5, 3.0), epsilon=rng.uniform(0.005, 0.2))
        n = rng.randint(2, 20)
        n_groups = rng.randint(1, 4)
        groups = {f"c{i}": f"g{rng.randrange(n_groups)}" for i in range(n)}
        positions = {f"c{i}": (rng.uniform(-120, 120), rng.uniform(-3, 3), rng.uniform(-120, 120)) for i in range(n)}
        expected = brute_force_privacy(zone, groups, positions)
        reports = check_group_privacy(zone, groups, positions)
        assert {(r.group_a, r.group_b): r.private for r in reports} == expected
        # consistency with the closed-form radius on non-boundary instances
        radius = privacy_radius(zone)
        for report in reports:
            if abs(report.min_distance - radius) > 1e-6 * max(radius, 1.0):
                assert report.private == (report.min_distance >= radius)
