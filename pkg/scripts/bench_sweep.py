#!/usr/bin/env python3
"""Fan-out sweep: run the in-memory load scenario across client counts and
print one row per run. Writes JSON reports next to the chosen output dir.

Usage: python scripts/bench_sweep.py [--clients 2,10,50,150] [--actions 100]
       [--presence-rate 10] [--out-dir bench_out]
"""

from __future__ import annotations

import argparse
import os
import time

from veld.harness import NetModel, ScenarioConfig, emit_report, run_scenario


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--clients", default="2,10,50,150")
    parser.add_argument("--actions", type=int, default=100)
    parser.add_argument("--presence-rate", type=float, default=0.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default="bench_out")
    args = parser.parse_args()

    os.makedirs(args.out_dir, exist_ok=True)
    counts = [int(c) for c in args.clients.split(",")]
    print(f"{'N':>4} {'events':>8} {'acks':>6} {'conv':>5} {'gap':>4} {'p50ms':>8} {'p99ms':>8} {'wall s':>7}")
    for n in counts:
        config = ScenarioConfig(
            n_clients=n,
            action_count=args.actions,
            presence_rate=args.presence_rate,
            net_model=NetModel(seed=args.seed),
        )
        start = time.perf_counter()
        report = run_scenario(config)
        wall = time.perf_counter() - start
        lat = report.action_latency_ms
        print(
            f"{n:>4} {report.delivered_events:>8} {report.acks:>6} "
            f"{'yes' if report.converged else 'NO':>5} {report.max_seq_gap:>4} "
            f"{lat.p50 if lat else float('nan'):>8.2f} {lat.p99 if lat else float('nan'):>8.2f} {wall:>7.2f}"
        )
        emit_report(report, os.path.join(args.out_dir, f"bench_n{n}.json"))


if __name__ == "__main__":
    main()
