// Client-side mirror of the replicated room state and its reducer.
//
// This must stay behaviorally identical to the server reducer on the shared
// kind set — same validation order, same clamping, same rejection codes —
// which tests/reducer.test.ts proves against golden vectors exported from the
// server implementation. State objects are treated as immutable; the reducer
// returns fresh objects and never mutates its input.

export type FaceOffPhase = "lobby" | "prompt_shown" | "revealed" | "finished";

export interface SlideShowState {
  deck_id: string | null;
  slide_index: number;
  deck_length: number;
}

export interface FaceOffState {
  phase: FaceOffPhase;
  round: number;
  prompt_id: string | null;
  scores: Record<string, number>;
}

export interface RoomState {
  apps: {
    faceoff: FaceOffState;
    slides: SlideShowState;
  };
  group_assignment: Record<string, string>;
  occupants: string[]; // kept sorted
  pods_locked: boolean;
  room_id: string;
}

export interface ActionInput {
  seq: number | null;
  app: string;
  kind: string;
  payload: Record<string, unknown>;
}

export const ROOM_WIDE_APPS = new Set(["pods", "groups"]);

export const KINDS: Record<string, Set<string>> = {
  slides: new Set(["SELECT_DECK", "NEXT_SLIDE", "PREV_SLIDE", "GOTO_SLIDE"]),
  faceoff: new Set(["NEXT_PROMPT", "REVEAL", "AWARD_POINT", "RESET"]),
  pods: new Set(["LOCK", "UNLOCK"]),
  groups: new Set(["ASSIGN", "CLEAR"]),
};

export type RejectionCode = "UNKNOWN_KIND" | "INVALID_PAYLOAD" | "ILLEGAL_TRANSITION";

export class ReducerError extends Error {
  constructor(
    readonly code: RejectionCode,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

export function initialRoomState(roomId: string): RoomState {
  return {
    apps: {
      faceoff: { phase: "lobby", round: 0, prompt_id: null, scores: {} },
      slides: { deck_id: null, slide_index: 0, deck_length: 0 },
    },
    group_assignment: {},
    occupants: [],
    pods_locked: false,
    room_id: roomId,
  };
}

export function isRelevant(app: string, binding: string): boolean {
  return app === binding || ROOM_WIDE_APPS.has(app);
}

function requireString(payload: Record<string, unknown>, key: string): string {
  const value = payload[key];
  if (typeof value !== "string" || value === "") {
    throw new ReducerError("INVALID_PAYLOAD", `'${key}' must be a non-empty string`);
  }
  return value;
}

function requireInt(payload: Record<string, unknown>, key: string, minimum: number): number {
  const value = payload[key];
  if (typeof value !== "number" || !Number.isInteger(value) || value < minimum) {
    throw new ReducerError("INVALID_PAYLOAD", `'${key}' must be an integer >= ${minimum}`);
  }
  return value;
}

function applySlides(slides: SlideShowState, kind: string, payload: Record<string, unknown>): SlideShowState {
  if (kind === "SELECT_DECK") {
    const deckId = requireString(payload, "deck_id");
    const deckLength = requireInt(payload, "deck_length", 1);
    return { deck_id: deckId, slide_index: 0, deck_length: deckLength };
  }
  if (slides.deck_id === null) {
    throw new ReducerError("ILLEGAL_TRANSITION", `${kind} with no deck selected`);
  }
  const last = slides.deck_length - 1;
  if (kind === "NEXT_SLIDE") {
    return { ...slides, slide_index: Math.min(slides.slide_index + 1, last) };
  }
  if (kind === "PREV_SLIDE") {
    return { ...slides, slide_index: Math.max(slides.slide_index - 1, 0) };
  }
  // GOTO_SLIDE
  const index = requireInt(payload, "index", 0);
  return { ...slides, slide_index: Math.max(0, Math.min(index, last)) };
}

function applyFaceoff(state: RoomState, kind: string, payload: Record<string, unknown>): FaceOffState {
  const game = state.apps.faceoff;
  if (kind === "NEXT_PROMPT") {
    const promptId = requireString(payload, "prompt_id");
    if (game.phase === "finished") {
      throw new ReducerError("ILLEGAL_TRANSITION", "NEXT_PROMPT after the game finished");
    }
    return { ...game, phase: "prompt_shown", round: game.round + 1, prompt_id: promptId };
  }
  if (kind === "REVEAL") {
    if (game.phase !== "prompt_shown") {
      throw new ReducerError("ILLEGAL_TRANSITION", `REVEAL while in ${game.phase}`);
    }
    return { ...game, phase: "revealed" };
  }
  if (kind === "AWARD_POINT") {
    const studentId = requireString(payload, "student_id");
    if (game.phase !== "revealed") {
      throw new ReducerError("ILLEGAL_TRANSITION", `AWARD_POINT while in ${game.phase}`);
    }
    if (!state.occupants.includes(studentId)) {
      throw new ReducerError("INVALID_PAYLOAD", `unknown student '${studentId}'`);
    }
    const scores = { ...game.scores, [studentId]: (game.scores[studentId] ?? 0) + 1 };
    return { ...game, scores };
  }
  // RESET
  return { phase: "lobby", round: 0, prompt_id: null, scores: {} };
}

function applyGroups(state: RoomState, kind: string, payload: Record<string, unknown>): Record<string, string> {
  if (kind === "CLEAR") {
    return {};
  }
  const assignment = payload["assignment"];
  if (typeof assignment !== "object" || assignment === null || Array.isArray(assignment)) {
    throw new ReducerError("INVALID_PAYLOAD", "'assignment' must be a client->label map");
  }
  const cleaned: Record<string, string> = {};
  for (const [clientId, label] of Object.entries(assignment as Record<string, unknown>)) {
    if (typeof label !== "string" || label === "") {
      throw new ReducerError("INVALID_PAYLOAD", "assignment entries must map client ids to non-empty labels");
    }
    if (!state.occupants.includes(clientId)) {
      throw new ReducerError("INVALID_PAYLOAD", `'${clientId}' is not an occupant of the room`);
    }
    cleaned[clientId] = label;
  }
  return cleaned;
}

export function applyAction(state: RoomState, action: ActionInput): RoomState {
  if (action.seq === null) {
    throw new Error("applyAction requires a server-assigned seq");
  }
  if (!(action.app in KINDS) || !KINDS[action.app].has(action.kind)) {
    throw new ReducerError("UNKNOWN_KIND", `${action.app}/${action.kind} is not a registered action kind`);
  }
  if (action.app === "slides") {
    return { ...state, apps: { ...state.apps, slides: applySlides(state.apps.slides, action.kind, action.payload) } };
  }
  if (action.app === "faceoff") {
    return { ...state, apps: { ...state.apps, faceoff: applyFaceoff(state, action.kind, action.payload) } };
  }
  if (action.app === "pods") {
    return { ...state, pods_locked: action.kind === "LOCK" };
  }
  // groups
  return { ...state, group_assignment: applyGroups(state, action.kind, action.payload) };
}

export function withOccupant(state: RoomState, clientId: string): RoomState {
  if (state.occupants.includes(clientId)) {
    return state;
  }
  return { ...state, occupants: [...state.occupants, clientId].sort() };
}

export function withoutOccupant(state: RoomState, clientId: string): RoomState {
  const assignment = { ...state.group_assignment };
  delete assignment[clientId];
  return {
    ...state,
    occupants: state.occupants.filter((id) => id !== clientId),
    group_assignment: assignment,
  };
}

/** Parse a snapshot's state object into a normalized RoomState. */
export function roomStateFromWire(raw: unknown): RoomState {
  const doc = raw as RoomState;
  return {
    apps: {
      faceoff: { ...doc.apps.faceoff, scores: { ...doc.apps.faceoff.scores } },
      slides: { ...doc.apps.slides },
    },
    group_assignment: { ...doc.group_assignment },
    occupants: [...doc.occupants].sort(),
    pods_locked: doc.pods_locked,
    room_id: doc.room_id,
  };
}
