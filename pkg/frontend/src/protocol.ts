/**
 * Wire protocol spoken by the windbench service.
 *
 * Newline-terminated JSON messages over a WebSocket.  The server
 * sends its hello first; the client answers with a hello carrying a
 * role, then exchanges commands (id echoed in every reply), telemetry
 * frames and events.
 */

export const PROTOCOL_VERSION = 1;

export type Role = "viewer" | "operator";

export interface TelemetrySample {
  t: number;
  v: number;
  omega: number;
  rpm: number;
  tsr: number;
  t_ref: number;
  t_applied: number;
  p_wt: number;
  p_est: number;
  p_exported: number;
  u_star: number;
  level_code: number;
  mode: string;
  trip_latched: boolean;
  violations: string[];
}

export interface ServerHello {
  kind: "hello";
  protocol_version: number;
  server: string;
  version: string;
  scenario: string;
  paused: boolean;
}

export interface CommandReply {
  kind: "command-reply";
  id: CommandId;
  ok: boolean;
  result?: Record<string, unknown>;
  error?: string;
}

export interface TelemetryMessage {
  kind: "telemetry";
  sample: TelemetrySample;
}

export interface EventMessage {
  kind: "event";
  event: string;
  t: number;
  data: Record<string, unknown>;
}

export type ServerMessage =
  | ServerHello
  | CommandReply
  | TelemetryMessage
  | EventMessage;

export type CommandId = number | string;

export class ProtocolError extends Error {}

const SERVER_KINDS = new Set(["hello", "command-reply", "telemetry", "event"]);

/** Parse one raw frame from the server; throws ProtocolError on garbage. */
export function parseServerMessage(raw: string): ServerMessage {
  let value: unknown;
  try {
    value = JSON.parse(raw);
  } catch (exc) {
    throw new ProtocolError(`malformed message: ${String(exc)}`);
  }
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new ProtocolError("message must be a JSON object");
  }
  const msg = value as Record<string, unknown>;
  const kind = msg["kind"];
  if (typeof kind !== "string" || !SERVER_KINDS.has(kind)) {
    throw new ProtocolError(`unexpected kind ${JSON.stringify(kind)}`);
  }
  if (kind === "telemetry" && typeof msg["sample"] !== "object") {
    throw new ProtocolError("telemetry without a sample");
  }
  if (kind === "event" && typeof msg["event"] !== "string") {
    throw new ProtocolError("event without a name");
  }
  if (kind === "command-reply" && typeof msg["ok"] !== "boolean") {
    throw new ProtocolError("command-reply without ok");
  }
  return msg as unknown as ServerMessage;
}

export function helloFrame(role: Role): string {
  return JSON.stringify({
    kind: "hello",
    protocol_version: PROTOCOL_VERSION,
    role,
  });
}

export function commandFrame(
  id: CommandId,
  name: string,
  args: Record<string, unknown>,
): string {
  return JSON.stringify({ kind: "command", id, name, args });
}
