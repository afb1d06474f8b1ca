// Role gating: without the instructor token the panel renders zero enabled
// mutating controls, and a scripted pass over every control emits zero ACTION
// messages. With the token, each control emits exactly one.

import { describe, expect, it } from "vitest";

import { buildPanel } from "../src/panel.js";
import { UiSession } from "../src/session.js";
import type { WireSocket } from "../src/session.js";

class FakeSocket implements WireSocket {
  sent: Array<Record<string, unknown>> = [];
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;

  send(data: string): void {
    this.sent.push(JSON.parse(data));
  }

  close(): void {
    this.onclose?.();
  }

  receive(msg: Record<string, unknown>): void {
    this.onmessage?.({ data: JSON.stringify(msg) });
  }
}

const SNAPSHOT_STATE = {
  apps: {
    faceoff: { phase: "revealed", round: 1, prompt_id: "p1", scores: {} },
    slides: { deck_id: "d", slide_index: 2, deck_length: 8 },
  },
  group_assignment: {},
  occupants: ["c1", "c2"],
  pods_locked: false,
  room_id: "island",
};

function joinedSession(role: "instructor" | "student"): { session: UiSession; socket: FakeSocket } {
  const socket = new FakeSocket();
  const session = new UiSession({
    url: "ws://fake",
    name: "t",
    room: "island",
    binding: "slides",
    token: role === "instructor" ? "tok" : undefined,
    socketFactory: () => socket,
  });
  socket.onopen?.();
  socket.receive({ t: "WELCOME", client_id: "c1", role });
  socket.receive({ t: "SNAPSHOT", room: "island", last_seq: 0, state: SNAPSHOT_STATE });
  socket.sent.length = 0; // drop HELLO/JOIN bookkeeping
  return { session, socket };
}

function scriptedPass(panel: ReturnType<typeof buildPanel>): void {
  const args: Record<string, Record<string, unknown>> = {
    "select-deck": { deck_id: "d2", deck_length: 5 },
    "goto-slide": { index: 3 },
    "next-prompt": { prompt_id: "p9" },
    "award-point": { student_id: "c2" },
    "assign-groups": { assignment: { c2: "red" } },
  };
  for (const control of panel.controls) {
    control.activate(args[control.id]);
  }
}

describe("student role", () => {
  it("renders zero enabled mutating controls", () => {
    const { session } = joinedSession("student");
    const panel = buildPanel(session);
    expect(panel.controls.filter((c) => c.mutating && c.enabled)).toHaveLength(0);
    expect(panel.controls.filter((c) => c.mutating)).not.toHaveLength(0);
  });

  it("emits zero ACTION messages during a scripted interaction pass", () => {
    const { session, socket } = joinedSession("student");
    const panel = buildPanel(session);
    scriptedPass(panel);
    const actions = socket.sent.filter((m) => m["t"] === "ACTION");
    expect(actions).toHaveLength(0);
    expect(session.actionsSent).toBe(0);
  });

  it("may still teleport (LEAVE + JOIN, not an ACTION)", () => {
    const { session, socket } = joinedSession("student");
    const panel = buildPanel(session);
    panel.control("teleport").activate({ room: "orientation" });
    expect(socket.sent.map((m) => m["t"])).toEqual(["LEAVE", "JOIN"]);
  });
});

describe("instructor role", () => {
  it("enables every mutating control", () => {
    const { session } = joinedSession("instructor");
    const panel = buildPanel(session);
    expect(panel.controls.filter((c) => c.mutating && !c.enabled)).toHaveLength(0);
  });

  it("emits exactly one ACTION per activation", () => {
    const { session, socket } = joinedSession("instructor");
    const panel = buildPanel(session);
    scriptedPass(panel);
    const actions = socket.sent.filter((m) => m["t"] === "ACTION");
    const mutating = panel.controls.filter((c) => c.mutating);
    expect(actions).toHaveLength(mutating.length);
    expect(actions.find((a) => a["kind"] === "NEXT_SLIDE")).toMatchObject({
      t: "ACTION",
      room: "island",
      app: "slides",
      kind: "NEXT_SLIDE",
      payload: {},
    });
  });
});
