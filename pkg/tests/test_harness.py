"""Load-harness behavior: fan-out arithmetic, convergence, determinism,
reporting. Small client counts here; the 150-client sweeps live in the
acceptance suite."""

from __future__ import annotations

import json

import pytest

from veld.harness import (
    LatencySummary,
    MetricsReport,
    NetModel,
    ScenarioConfig,
    emit_report,
    format_table,
    run_scenario,
    verify_convergence,
)
from veld.harness.report import percentile


def test_verify_convergence():
    assert verify_convergence(["d", "d", "d"])
    assert not verify_convergence(["d", "e"])
    assert verify_convergence(["only"])
    with pytest.raises(ValueError):
        verify_convergence([])


def test_three_clients_ten_actions_counts():
    report = run_scenario(ScenarioConfig(n_clients=3, action_count=10))
    assert report.delivered_events == 20  # M * (N - 1)
    assert report.acks == 10
    assert report.converged
    assert report.max_seq_gap == 0
    assert report.action_latency_ms is not None


def test_single_client_no_deliveries_latency_absent():
    report = run_scenario(ScenarioConfig(n_clients=1, action_count=5))
    assert report.delivered_events == 0
    assert report.acks == 5
    assert report.action_latency_ms is None
    assert report.converged


def test_zero_action_scenario_latency_absent():
    report = run_scenario(ScenarioConfig(n_clients=2, action_count=0, presence_rate=30.0, duration_s=0.3))
    assert report.delivered_events == 0
    assert report.acks == 0
    assert report.action_latency_ms is None
    assert report.converged


def test_determinism_under_seed_single_instructor():
    config = ScenarioConfig(n_clients=4, action_count=25, net_model=NetModel(seed=11))
    first = run_scenario(config)
    second = run_scenario(config)
    assert first.delivered_events == second.delivered_events == 75
    assert first.acks == second.acks == 25
    assert first.digest == second.digest
    assert first.converged and second.converged


def test_presence_traffic_never_changes_digest():
    base = run_scenario(ScenarioConfig(n_clients=3, action_count=12, net_model=NetModel(seed=5)))
    noisy = run_scenario(
        ScenarioConfig(n_clients=3, action_count=12, presence_rate=40.0, net_model=NetModel(seed=5))
    )
    assert base.digest == noisy.digest
    assert noisy.converged


def test_scaling_law_slope_is_action_count():
    m = 10
    deliveries = {
        n: run_scenario(ScenarioConfig(n_clients=n, action_count=m)).delivered_events for n in (2, 4, 6)
    }
    assert deliveries == {2: m * 1, 4: m * 3, 6: m * 5}


def test_two_instructors_interleaved_converge():
    report = run_scenario(
        ScenarioConfig(n_clients=5, n_instructors=2, action_count=30, net_model=NetModel(seed=9))
    )
    assert report.acks == 30
    assert report.delivered_events == 30 * 4
    assert report.converged
    assert report.max_seq_gap == 0


def test_scenario_over_real_tcp_socket():
    report = run_scenario(ScenarioConfig(n_clients=3, action_count=8), in_memory=False)
    assert report.delivered_events == 16
    assert report.converged


def test_scenario_with_injected_latency():
    config = ScenarioConfig(
        n_clients=3,
        action_count=6,
        net_model=NetModel(base_latency_ms=10.0, jitter_ms=5.0, seed=2),
    )
    report = run_scenario(config)
    assert report.converged
    assert report.delivered_events == 12
    # one-way delay each direction puts the floor near 2x base latency
    assert report.action_latency_ms.p50 >= 10.0


def test_scenario_config_validation():
    with pytest.raises(ValueError):
        ScenarioConfig(n_clients=0)
    with pytest.raises(ValueError):
        ScenarioConfig(n_clients=200)
    with pytest.raises(ValueError):
        ScenarioConfig(n_clients=2, n_instructors=3)
    with pytest.raises(ValueError):
        ScenarioConfig(n_clients=2, action_rate=-1)


def test_percentile_nearest_rank_ordering():
    values = [5.0, 1.0, 9.0, 3.0, 7.0]
    assert percentile(values, 50) == 5.0
    assert percentile(values, 95) == 9.0
    assert percentile(values, 50) <= percentile(values, 95) <= percentile(values, 99) <= max(values)
    with pytest.raises(ValueError):
        percentile([], 50)


def test_report_round_trips_through_json(tmp_path):
    report = MetricsReport(
        n_clients=3,
        n_instructors=1,
        action_count=10,
        delivered_events=20,
        acks=10,
        action_latency_ms=LatencySummary(p50=1.0, p95=2.0, p99=2.5, max=3.0),
        converged=True,
        digest="abc123",
        msgs_per_second=120.5,
        max_seq_gap=0,
        per_client_max_seq_gap={"c1": 0, "c2": 0, "c3": 0},
        duration_s=0.8,
    )
    path = tmp_path / "report.json"
    table_path = tmp_path / "report.txt"
    emit_report(report, str(path), table_path=str(table_path))
    loaded = MetricsReport.from_dict(json.loads(path.read_text()))
    assert loaded == report
    table = table_path.read_text()
    assert "events delivered" in table and "converged" in table


def test_report_latency_absent_not_zero(tmp_path):
    report = run_scenario(ScenarioConfig(n_clients=1, action_count=0, duration_s=0.1))
    path = tmp_path / "r.json"
    emit_report(report, str(path))
    raw = json.loads(path.read_text())
    assert raw["action_latency_ms"] is None
    assert "absent" in format_table(report)
    assert MetricsReport.from_dict(raw) == report
