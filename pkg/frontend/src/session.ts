// Live session model: one WebSocket connection, one room, one state mirror.
//
// The mirror follows the server the same way every other replica does: the
// join snapshot seeds it, received EVENTs run through the shared reducer in
// seq order, and this client's own accepted actions are applied when their
// ACK arrives (the server never echoes an EVENT back to its actor). Presence
// join/leave maintain the occupant roster; position presence never touches
// the replicated state.

import type { ActionMsg, ErrorMsg, EventMsg, Role, ServerMsg } from "./protocol.js";
import {
  applyAction,
  initialRoomState,
  roomStateFromWire,
  withOccupant,
  withoutOccupant,
  type RoomState,
} from "./state.js";
import { digestValue } from "./canonical.js";

// Minimal common surface of the browser WebSocket and the `ws` package.
export interface WireSocket {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => WireSocket;

export type ConnectionStatus = "connecting" | "connected" | "joined" | "closed" | "error";

export interface RosterEntry {
  name: string | null;
  role: Role | null;
  position: [number, number, number] | null;
}

export interface SessionOptions {
  url: string;
  name: string;
  room: string;
  binding: string;
  token?: string;
  /** Recompute the mirror digest after every applied EVENT (dev builds). */
  digestCheck?: boolean;
  socketFactory?: SocketFactory;
}

const ACTION_REJECTION_CODES = new Set(["UNAUTHORIZED", "UNKNOWN_KIND", "INVALID_PAYLOAD", "ILLEGAL_TRANSITION"]);

export class UiSession {
  clientId: string | null = null;
  role: Role | null = null;
  room: string | null = null;
  binding: string;
  status: ConnectionStatus = "connecting";
  state: RoomState = initialRoomState("");
  lastSeq = 0;
  roster = new Map<string, RosterEntry>();
  errors: ErrorMsg[] = [];
  /** Sequence of mirror digests, one per applied event, when digestCheck is on. */
  digests: string[] = [];
  actionsSent = 0;

  onChange: (() => void) | null = null;
  onEvent: ((event: EventMsg) => void) | null = null;
  onError: ((error: ErrorMsg) => void) | null = null;

  private socket: WireSocket;
  private pending: ActionMsg[] = [];
  private digestCheck: boolean;
  private digestChain: Promise<void> = Promise.resolve();
  private waiters: Array<{ predicate: () => boolean; resolve: () => void }> = [];

  constructor(private options: SessionOptions) {
    this.binding = options.binding;
    this.digestCheck = options.digestCheck ?? false;
    const factory = options.socketFactory ?? ((url: string) => new WebSocket(url) as unknown as WireSocket);
    this.socket = factory(options.url);
    this.socket.onopen = () => {
      this.status = "connected";
      const hello: Record<string, unknown> = { t: "HELLO", name: options.name };
      if (options.token !== undefined) {
        hello["token"] = options.token;
      }
      this.socket.send(JSON.stringify(hello));
    };
    this.socket.onmessage = (ev) => this.handleMessage(String(ev.data));
    this.socket.onclose = () => {
      if (this.status !== "error") {
        this.status = "closed";
      }
      this.notify();
    };
    this.socket.onerror = () => {
      this.status = "error";
      this.notify();
    };
  }

  close(): void {
    this.socket.close();
  }

  /** Send one action; the mirror updates when the ACK comes back. */
  sendAction(app: string, kind: string, payload: Record<string, unknown> = {}): void {
    const msg: ActionMsg = {
      t: "ACTION",
      room: this.room ?? this.options.room,
      app,
      kind,
      payload,
      cts: Date.now(),
    };
    this.pending.push(msg);
    this.actionsSent += 1;
    this.socket.send(JSON.stringify(msg));
  }

  sendPos(x: number, y: number, z: number): void {
    this.socket.send(JSON.stringify({ t: "POS", x, y, z }));
  }

  /** Leave + join: the wire realization of teleporting to a lesson. */
  teleport(room: string, binding?: string): void {
    this.socket.send(JSON.stringify({ t: "LEAVE" }));
    this.socket.send(JSON.stringify({ t: "JOIN", room, binding: binding ?? this.binding }));
  }

  waitUntil(predicate: () => boolean, timeoutMs = 10_000): Promise<void> {
    if (predicate()) {
      return Promise.resolve();
    }
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error("waitUntil timed out")), timeoutMs);
      this.waiters.push({
        predicate,
        resolve: () => {
          clearTimeout(timer);
          resolve();
        },
      });
    });
  }

  /** Resolves after all queued digest computations have settled. */
  digestsSettled(): Promise<void> {
    return this.digestChain;
  }

  private handleMessage(raw: string): void {
    for (const line of raw.split("\n")) {
      if (line.trim() !== "") {
        this.dispatch(JSON.parse(line) as ServerMsg);
      }
    }
    this.notify();
  }

  private dispatch(msg: ServerMsg): void {
    switch (msg.t) {
      case "WELCOME":
        this.clientId = msg.client_id;
        this.role = msg.role;
        this.socket.send(JSON.stringify({ t: "JOIN", room: this.options.room, binding: this.options.binding }));
        break;
      case "SNAPSHOT":
        this.state = roomStateFromWire(msg.state);
        this.lastSeq = msg.last_seq;
        this.room = msg.room;
        this.roster.clear();
        this.status = "joined";
        break;
      case "EVENT":
        this.applyEvent(msg);
        break;
      case "ACK":
        this.applyAck(msg.seq);
        break;
      case "PRESENCE":
        this.applyPresence(msg);
        break;
      case "ERROR":
        this.errors.push(msg);
        if (ACTION_REJECTION_CODES.has(msg.code) && this.pending.length > 0) {
          this.pending.shift();
        }
        this.onError?.(msg);
        break;
    }
  }

  private applyEvent(msg: EventMsg): void {
    this.state = applyAction(this.state, { seq: msg.seq, app: msg.app, kind: msg.kind, payload: msg.payload });
    this.lastSeq = msg.seq;
    this.recordDigest();
    this.onEvent?.(msg);
  }

  private applyAck(seq: number): void {
    const body = this.pending.shift();
    if (body === undefined) {
      return;
    }
    this.state = applyAction(this.state, { seq, app: body.app, kind: body.kind, payload: body.payload });
    this.lastSeq = seq;
    this.recordDigest();
  }

  private applyPresence(msg: { kind: string; client_id: string; name?: string; role?: Role; x?: number; y?: number; z?: number }): void {
    if (msg.kind === "join") {
      this.roster.set(msg.client_id, {
        name: msg.name ?? null,
        role: msg.role ?? null,
        position: [msg.x ?? 0, msg.y ?? 0, msg.z ?? 0],
      });
      this.state = withOccupant(this.state, msg.client_id);
    } else if (msg.kind === "leave") {
      this.roster.delete(msg.client_id);
      this.state = withoutOccupant(this.state, msg.client_id);
    } else if (msg.kind === "pos") {
      const entry = this.roster.get(msg.client_id) ?? { name: null, role: null, position: null };
      entry.position = [msg.x ?? 0, msg.y ?? 0, msg.z ?? 0];
      this.roster.set(msg.client_id, entry);
    }
  }

  private recordDigest(): void {
    if (!this.digestCheck) {
      return;
    }
    const snapshot = this.state;
    this.digestChain = this.digestChain.then(async () => {
      this.digests.push(await digestValue(snapshot));
    });
  }

  private notify(): void {
    this.waiters = this.waiters.filter((waiter) => {
      if (waiter.predicate()) {
        waiter.resolve();
        return false;
      }
      return true;
    });
    this.onChange?.();
  }
}
