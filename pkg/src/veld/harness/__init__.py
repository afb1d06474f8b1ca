from veld.harness.client import SimClient, TcpClientConnection
from veld.harness.report import LatencySummary, MetricsReport, emit_report, format_table, verify_convergence
from veld.harness.scenario import ConnectFailure, ScenarioConfig, ScenarioTimeout, run_scenario, run_scenario_async
from veld.server.memory import NetModel

__all__ = [
    "ConnectFailure",
    "LatencySummary",
    "MetricsReport",
    "NetModel",
    "ScenarioConfig",
    "ScenarioTimeout",
    "SimClient",
    "TcpClientConnection",
    "emit_report",
    "format_table",
    "run_scenario",
    "run_scenario_async",
    "verify_convergence",
]
