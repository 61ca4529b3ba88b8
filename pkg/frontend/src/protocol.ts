/** Wire types for the session service: JSON messages with a `type` field. */

export type PatchKindName =
  | "empty"
  | "structure"
  | "exit"
  | "authority_post"
  | "hazard";

export type Tool = "structure" | "exit" | "authority_post" | "erase";

/** The patch kind a paint tool deposits. */
export function toolKind(tool: Tool): PatchKindName {
  return tool === "erase" ? "empty" : tool;
}

export interface SetupParams {
  population: number;
  authorities: number;
  spawn_exit_authority: boolean;
  seed: number;
  deadline: number;
}

export type ClientMessage =
  | { type: "create_session"; width?: number; height?: number; session_id?: string }
  | { type: "load_preset"; name: string }
  | { type: "set_patch"; x: number; y: number; kind: PatchKindName }
  | ({ type: "setup" } & Partial<SetupParams>)
  | { type: "run" }
  | { type: "pause" }
  | { type: "step"; n: number }
  | { type: "clear"; scope: "turtles" | "all" }
  | { type: "get_snapshot" };

export type SessionMode = "editing" | "paused" | "running" | "ended";

export interface AgentPayload {
  id: number;
  kind: "citizen" | "authority";
  x: number;
  y: number;
  state: "calm" | "alerted" | "panicked" | null;
  color: string;
  guided: boolean;
  status: "active" | "failed";
}

export interface StatsPayload {
  total_citizens: number;
  active: number;
  successful_escapes: number;
  failed_evacuations: number;
  total_contagions: number;
  pct_panicked: number;
  pct_alerted: number;
  pct_calm: number;
  duration: number | null;
}

export type PatchChange = [number, number, PatchKindName];

export interface SessionEvent {
  type: "session";
  session_id: string;
  width: number;
  height: number;
  mode: SessionMode;
  tick_rate: number;
}

export interface SnapshotEvent {
  type: "snapshot";
  tick: number | null;
  mode: SessionMode;
  agents: AgentPayload[];
  stats: StatsPayload | null;
  patches_changed: PatchChange[];
  reset: boolean;
}

export interface EndedEvent {
  type: "ended";
  tick: number;
  stats: StatsPayload;
}

export interface ErrorEvent {
  type: "error";
  code: string;
  detail: string;
}

export interface OkEvent {
  type: "ok";
  op: string;
}

export type ServerEvent =
  | SessionEvent
  | SnapshotEvent
  | EndedEvent
  | ErrorEvent
  | OkEvent;

export function encodeMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

const EVENT_TYPES = new Set(["session", "snapshot", "ended", "error", "ok"]);

/** Parse one frame; malformed frames become synthetic error events. */
export function parseEvent(raw: string): ServerEvent {
  let value: unknown;
  try {
    value = JSON.parse(raw);
  } catch {
    return { type: "error", code: "BadFrame", detail: "unparseable frame" };
  }
  if (
    typeof value !== "object" ||
    value === null ||
    !EVENT_TYPES.has((value as { type?: unknown }).type as string)
  ) {
    return { type: "error", code: "BadFrame", detail: "unknown event shape" };
  }
  return value as ServerEvent;
}
