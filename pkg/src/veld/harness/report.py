"""Metrics aggregation and reporting for load runs.

Invariants: ``converged`` implies every client digest was equal (and equal to
the server digest when one was reachable); ``delivered_events`` equals
``M * (N - 1)`` for M accepted actions and N occupants when nothing
disconnects; latency percentiles are nearest-rank, so p50 <= p95 <= p99 <= max
always holds; a run with no deliveries reports latency as absent, not zero.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Any, Sequence


def verify_convergence(digests: Sequence[str]) -> bool:
    """True iff all digests are equal (vacuously true for a single one)."""
    if not digests:
        raise ValueError("need at least one digest")
    return all(d == digests[0] for d in digests)


def percentile(values: Sequence[float], q: float) -> float:
    """Nearest-rank percentile over a non-empty sample."""
    if not values:
        raise ValueError("no values")
    ordered = sorted(values)
    rank = max(1, math.ceil(q / 100.0 * len(ordered)))
    return ordered[rank - 1]


@dataclass(frozen=True)
class LatencySummary:
    p50: float
    p95: float
    p99: float
    max: float

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "LatencySummary":
        return cls(
            p50=percentile(samples, 50),
            p95=percentile(samples, 95),
            p99=percentile(samples, 99),
            max=max(samples),
        )

    def to_dict(self) -> dict[str, float]:
        return {"p50": self.p50, "p95": self.p95, "p99": self.p99, "max": self.max}


@dataclass(frozen=True)
class MetricsReport:
    n_clients: int
    n_instructors: int
    action_count: int
    delivered_events: int
    acks: int
    action_latency_ms: LatencySummary | None
    converged: bool
    digest: str | None
    msgs_per_second: float
    max_seq_gap: int
    per_client_max_seq_gap: dict[str, int]
    duration_s: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_clients": self.n_clients,
            "n_instructors": self.n_instructors,
            "action_count": self.action_count,
            "delivered_events": self.delivered_events,
            "acks": self.acks,
            "action_latency_ms": self.action_latency_ms.to_dict() if self.action_latency_ms else None,
            "convergence": {"converged": self.converged, "digest": self.digest},
            "msgs_per_second": self.msgs_per_second,
            "max_seq_gap": self.max_seq_gap,
            "per_client_max_seq_gap": dict(sorted(self.per_client_max_seq_gap.items())),
            "duration_s": self.duration_s,
        }

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "MetricsReport":
        latency = raw.get("action_latency_ms")
        return cls(
            n_clients=raw["n_clients"],
            n_instructors=raw["n_instructors"],
            action_count=raw["action_count"],
            delivered_events=raw["delivered_events"],
            acks=raw["acks"],
            action_latency_ms=LatencySummary(**latency) if latency else None,
            converged=raw["convergence"]["converged"],
            digest=raw["convergence"]["digest"],
            msgs_per_second=raw["msgs_per_second"],
            max_seq_gap=raw["max_seq_gap"],
            per_client_max_seq_gap={str(k): int(v) for k, v in raw["per_client_max_seq_gap"].items()},
            duration_s=raw["duration_s"],
        )


def format_table(report: MetricsReport) -> str:
    rows = [
        ("clients", str(report.n_clients)),
        ("instructors", str(report.n_instructors)),
        ("actions", str(report.action_count)),
        ("events delivered", str(report.delivered_events)),
        ("acks", str(report.acks)),
        ("converged", "yes" if report.converged else "NO"),
        ("digest", (report.digest or "-")[:16]),
        ("max seq gap", str(report.max_seq_gap)),
        ("msgs/s", f"{report.msgs_per_second:.1f}"),
        ("duration", f"{report.duration_s:.2f} s"),
    ]
    if report.action_latency_ms is not None:
        lat = report.action_latency_ms
        rows.append(
            ("latency ms (p50/p95/p99/max)", f"{lat.p50:.2f} / {lat.p95:.2f} / {lat.p99:.2f} / {lat.max:.2f}")
        )
    else:
        rows.append(("latency ms", "absent (no deliveries)"))
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows)


def emit_report(report: MetricsReport, path: str, table_path: str | None = None) -> None:
    """Write the JSON report (and, optionally, the table rendering)."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")
    if table_path is not None:
        with open(table_path, "w", encoding="utf-8") as handle:
            handle.write(format_table(report) + "\n")


__all__ = [
    "LatencySummary",
    "MetricsReport",
    "emit_report",
    "format_table",
    "percentile",
    "verify_convergence",
]
