// Behavioral identity with the server reducer, proven against golden vectors
// exported by scripts/export_reducer_vectors.py: same result states, same
// canonical digests, same rejection codes.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { digestValue, canonicalStringify } from "../src/canonical.js";
import { applyAction, initialRoomState, ReducerError, roomStateFromWire, withOccupant, withoutOccupant } from "../src/state.js";

interface Vector {
  state: unknown;
  action: { seq: number; app: string; kind: string; payload: Record<string, unknown> };
  result?: unknown;
  digest?: string;
  error?: string;
}

const fixturePath = join(dirname(fileURLToPath(import.meta.url)), "fixtures", "reducer_vectors.json");
const vectors: Vector[] = JSON.parse(readFileSync(fixturePath, "utf-8")).vectors;

describe("reducer golden vectors", () => {
  it("has both accepted and rejected cases", () => {
    expect(vectors.length).toBeGreaterThanOrEqual(300);
    expect(vectors.some((v) => v.error !== undefined)).toBe(true);
    expect(vectors.some((v) => v.result !== undefined)).toBe(true);
  });

  it("matches the server reducer on every vector", async () => {
    for (const vector of vectors) {
      const state = roomStateFromWire(vector.state);
      const input = { seq: vector.action.seq, app: vector.action.app, kind: vector.action.kind, payload: vector.action.payload };
      if (vector.error !== undefined) {
        let code: string | null = null;
        try {
          applyAction(state, input);
        } catch (err) {
          code = err instanceof ReducerError ? err.code : "OTHER";
        }
        expect(code, JSON.stringify(vector.action)).toBe(vector.error);
      } else {
        const result = applyAction(state, input);
        expect(canonicalStringify(result as never)).toBe(canonicalStringify(vector.result as never));
        expect(await digestValue(result)).toBe(vector.digest);
      }
    }
  });

  it("never mutates the input state", () => {
    for (const vector of vectors.slice(0, 50)) {
      const state = roomStateFromWire(vector.state);
      const before = canonicalStringify(state as never);
      try {
        applyAction(state, vector.action);
      } catch {
        // rejection still must not mutate
      }
      expect(canonicalStringify(state as never)).toBe(before);
    }
  });
});

describe("occupancy helpers", () => {
  it("keeps occupants sorted and idempotent", () => {
    let state = initialRoomState("r1");
    state = withOccupant(state, "c9");
    state = withOccupant(state, "c1");
    state = withOccupant(state, "c9");
    expect(state.occupants).toEqual(["c1", "c9"]);
  });

  it("prunes the group entry on leave", () => {
    let state = initialRoomState("r1");
    state = withOccupant(state, "c1");
    state = { ...state, group_assignment: { c1: "red" } };
    state = withoutOccupant(state, "c1");
    expect(state.occupants).toEqual([]);
    expect(state.group_assignment).toEqual({});
  });
});

describe("canonical serialization", () => {
  it("orders keys and omits whitespace like the server", () => {
    expect(canonicalStringify({ b: 1, a: { y: 2, x: 3 } } as never)).toBe('{"a":{"x":3,"y":2},"b":1}');
  });

  it("digests the initial room state identically regardless of construction order", async () => {
    const a = initialRoomState("island");
    const b = roomStateFromWire(JSON.parse(canonicalStringify(a as never)));
    expect(await digestValue(a)).toBe(await digestValue(b));
  });
});
