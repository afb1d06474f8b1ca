// Wire protocol types: newline-delimited JSON over TCP on the server side,
// one JSON object per text frame over the WebSocket bridge here.

export type Role = "instructor" | "student";

export interface HelloMsg {
  t: "HELLO";
  token?: string;
  name: string;
}

export interface JoinMsg {
  t: "JOIN";
  room: string;
  binding: string;
}

export interface LeaveMsg {
  t: "LEAVE";
}

export interface ActionMsg {
  t: "ACTION";
  room: string;
  app: string;
  kind: string;
  payload: Record<string, unknown>;
  cts: number;
}

export interface PosMsg {
  t: "POS";
  x: number;
  y: number;
  z: number;
}

export type ClientMsg = HelloMsg | JoinMsg | LeaveMsg | ActionMsg | PosMsg;

export interface WelcomeMsg {
  t: "WELCOME";
  client_id: string;
  role: Role;
}

export interface SnapshotMsg {
  t: "SNAPSHOT";
  room: string;
  last_seq: number;
  state: unknown;
}

export interface EventMsg {
  t: "EVENT";
  seq: number;
  room: string;
  app: string;
  kind: string;
  payload: Record<string, unknown>;
  actor: string;
}

export interface AckMsg {
  t: "ACK";
  seq: number;
}

export interface PresenceMsg {
  t: "PRESENCE";
  kind: "join" | "leave" | "pos";
  client_id: string;
  name?: string;
  role?: Role;
  x?: number;
  y?: number;
  z?: number;
}

export interface ErrorMsg {
  t: "ERROR";
  code: string;
  detail: string;
}

export type ServerMsg = WelcomeMsg | SnapshotMsg | EventMsg | AckMsg | PresenceMsg | ErrorMsg;
