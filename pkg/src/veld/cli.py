"""veld command line: serve, validate-world, audio-report, bench, survey."""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys

from veld.audio import AudioZone, NoPrivacy, check_group_privacy, gain_matrix, privacy_radius
from veld.harness.report import emit_report, format_table
from veld.harness.scenario import ConnectFailure, ScenarioConfig, ScenarioTimeout, run_scenario
from veld.server.config import ServerConfig
from veld.server.core import LessonServer
from veld.server.memory import NetModel
from veld.server.tcp import serve_tcp
from veld.server.wsbridge import serve_ws
from veld.survey import (
    Mode,
    SurveyError,
    bundled_responses,
    bundled_subjects,
    load_responses,
    load_subjects,
    paired_shift,
    preference_rate,
    summarize,
)
from veld.world import WorldError, load_world_file


def _cmd_serve(args: argparse.Namespace) -> int:
    config = ServerConfig.from_file(args.config)
    if args.port is not None:
        config.listen_port = args.port
    if args.max_clients is not None:
        config.max_clients = args.max_clients
    server = LessonServer(config)

    async def main() -> None:
        tcp = await serve_tcp(server, args.host, config.listen_port)
        ws = await serve_ws(server, args.host, config.effective_ws_port)
        print(
            f"veld serving {len(server.rooms)} room(s) on {args.host}:{config.listen_port} "
            f"(ws bridge on {config.effective_ws_port})",
            flush=True,
        )
        try:
            await asyncio.Future()
        finally:
            tcp.close()
            ws.close()

    try:
        asyncio.run(main())
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_validate_world(args: argparse.Namespace) -> int:
    try:
        world = load_world_file(args.path)
    except WorldError as err:
        print(f"INVALID [{err.code}] {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"INVALID [IO] {err}", file=sys.stderr)
        return 1
    portal_count = sum(len(lesson.portals) for lesson in world.lessons.values())
    pod_count = sum(len(lesson.pods) for lesson in world.lessons.values())
    print(f"OK: {len(world.lessons)} lesson(s), {portal_count} portal(s), {pod_count} pod(s)")
    return 0


def _cmd_audio_report(args: argparse.Namespace) -> int:
    with open(args.positions, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    zone_raw = doc.get("zone", {})
    zone = AudioZone(
        coef=args.coef if args.coef is not None else float(zone_raw.get("coef", 0.5)),
        ref_distance=args.ref_distance if args.ref_distance is not None else float(zone_raw.get("ref_distance", 1.0)),
        epsilon=args.epsilon if args.epsilon is not None else float(zone_raw.get("epsilon", 1.0 / 64.0)),
    )
    positions = {cid: tuple(p) for cid, p in doc["positions"].items()}
    matrix = gain_matrix(zone, positions)

    print(f"zone: coef={zone.coef} ref_distance={zone.ref_distance} epsilon={zone.epsilon}")
    try:
        print(f"privacy radius: {privacy_radius(zone):.3f} m")
    except NoPrivacy:
        print("privacy radius: unattainable (coef = 1)")
    header = "listener\\speaker " + " ".join(f"{cid:>8}" for cid in matrix.ids)
    print(header)
    for i, cid in enumerate(matrix.ids):
        print(f"{cid:>17} " + " ".join(f"{v:8.4f}" for v in matrix.values[i]))

    groups = doc.get("groups")
    if groups:
        try:
            reports = check_group_privacy(zone, groups, positions)
        except NoPrivacy:
            print("group privacy: unattainable (coef = 1)")
            return 0
        for report in reports:
            verdict = "private" if report.private else "NOT private"
            print(
                f"groups {report.group_a} <-> {report.group_b}: {verdict} "
                f"(max gain {report.max_gain:.6f}, min distance {report.min_distance:.2f} m)"
            )
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    config = ScenarioConfig(
        n_clients=args.clients,
        n_instructors=args.instructors,
        action_count=args.actions,
        action_rate=args.rate,
        presence_rate=args.presence_rate,
        duration_s=args.duration,
        net_model=NetModel(base_latency_ms=args.latency_ms, jitter_ms=args.jitter_ms, seed=args.seed),
    )
    kwargs: dict = {"room": args.room, "instructor_token": args.token}
    if args.server:
        kwargs["endpoint"] = args.server
    else:
        kwargs["in_memory"] = args.in_memory
    report = run_scenario(config, **kwargs)
    print(format_table(report))
    if args.out:
        emit_report(report, args.out)
        print(f"report written to {args.out}")
    return 0 if report.converged and report.max_seq_gap == 0 else 1


def _cmd_survey(args: argparse.Namespace) -> int:
    responses = load_responses(args.infile) if args.infile else bundled_responses()
    subjects = None
    if args.subjects:
        subjects = load_subjects(args.subjects)
    elif not args.infile:
        subjects = bundled_subjects()

    out: dict = {"question": args.question, "modes": {}}
    for mode in (Mode.DESKTOP, Mode.VR):
        summary = summarize(responses, args.question, mode)
        out["modes"][mode.value] = summary.to_dict()
    shift = paired_shift(responses, args.question)
    out["paired_shift"] = shift.to_dict()
    if subjects is not None:
        prefs = {sid: s["prefers"] for sid, s in subjects.items()}
        rate = preference_rate(prefs)
        out["preference"] = {
            "prefer_vr": sum(1 for m in prefs.values() if m is Mode.VR),
            "n": len(prefs),
            "value": float(rate),
        }

    rendered = json.dumps(out, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(rendered + "\n")
    print(rendered)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="veld", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the lesson sync server")
    p_serve.add_argument("--port", type=int, default=None, help="override the configured listen port")
    p_serve.add_argument("--config", required=True, help="server config JSON path")
    p_serve.add_argument("--max-clients", type=int, default=None, help="override the configured client cap")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.set_defaults(func=_cmd_serve)

    p_validate = sub.add_parser("validate-world", help="validate a world config file")
    p_validate.add_argument("path")
    p_validate.set_defaults(func=_cmd_validate_world)

    p_audio = sub.add_parser("audio-report", help="gain matrix and privacy report for a positions file")
    p_audio.add_argument("--positions", required=True, help="JSON: {positions: {id: [x,y,z]}, groups?, zone?}")
    p_audio.add_argument("--coef", type=float, default=None)
    p_audio.add_argument("--ref-distance", type=float, default=None)
    p_audio.add_argument("--epsilon", type=float, default=None)
    p_audio.set_defaults(func=_cmd_audio_report)

    p_bench = sub.add_parser("bench", help="drive N simulated clients and report metrics")
    p_bench.add_argument("--clients", type=int, required=True)
    p_bench.add_argument("--actions", type=int, default=100)
    p_bench.add_argument("--rate", type=float, default=0.0, help="combined instructor actions/s (0 = burst)")
    p_bench.add_argument("--instructors", type=int, default=1)
    p_bench.add_argument("--presence-rate", type=float, default=0.0, help="position updates/s per client")
    p_bench.add_argument("--duration", type=float, default=60.0)
    p_bench.add_argument("--out", default=None, help="write the JSON report here")
    p_bench.add_argument("--room", default="bench")
    p_bench.add_argument("--token", default=None, help="instructor token of the target server")
    p_bench.add_argument("--server", default=None, help="host:port of an external server (default: local)")
    p_bench.add_argument("--in-memory", action="store_true", help="use the in-memory transport")
    p_bench.add_argument("--latency-ms", type=float, default=0.0)
    p_bench.add_argument("--jitter-ms", type=float, default=0.0)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(func=_cmd_bench)

    p_survey = sub.add_parser("survey", help="summarize Likert data (bundled dataset by default)")
    p_survey.add_argument("--in", dest="infile", default=None, help="responses CSV (default: bundled)")
    p_survey.add_argument("--subjects", default=None, help="subjects CSV with preferences")
    p_survey.add_argument("--question", required=True)
    p_survey.add_argument("--out", default=None, help="write the JSON summary here")
    p_survey.set_defaults(func=_cmd_survey)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SurveyError, NoPrivacy, ScenarioTimeout, ConnectFailure, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
