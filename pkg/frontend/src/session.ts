/**
 * Protocol session: one console's connection to the bench service.
 *
 * The session is transport-agnostic (SocketLike) and fully
 * pull-based: it absorbs frames as they arrive and the renderer polls
 * `snapshot()` once per animation frame.  Commands are tracked by id
 * and a control is rendered as applied only after the server's ok
 * reply — there is no optimistic local state.
 */

import {
  CommandId,
  CommandReply,
  EventMessage,
  PROTOCOL_VERSION,
  ProtocolError,
  Role,
  ServerHello,
  TelemetrySample,
  commandFrame,
  helloFrame,
  parseServerMessage,
} from "./protocol.js";
import { Ring } from "./ring.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((data: string) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
}

/** Adapt a browser WebSocket to SocketLike. */
export function wrapWebSocket(ws: WebSocket): SocketLike {
  const sock: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onmessage: null,
    onopen: null,
    onclose: null,
  };
  ws.onmessage = (ev) => sock.onmessage?.(String(ev.data));
  ws.onopen = () => sock.onopen?.();
  ws.onclose = () => sock.onclose?.();
  return sock;
}

/** Scriptable in-memory socket for tests. */
export class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onmessage: ((data: string) => void) | null = null;
  onopen: (() => void) | null = null;
  onclose: (() => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  open(): void {
    this.onopen?.();
  }

  /** Deliver one server frame (the service terminates frames with \n). */
  deliver(message: unknown): void {
    this.onmessage?.(JSON.stringify(message) + "\n");
  }

  lastSent(): Record<string, unknown> {
    const raw = this.sent[this.sent.length - 1];
    if (raw === undefined) throw new Error("nothing sent");
    return JSON.parse(raw) as Record<string, unknown>;
  }
}

export type SessionPhase =
  | "connecting"
  | "ready"
  | "closed"
  | "failed";

export interface PendingCommand {
  id: CommandId;
  name: string;
  args: Record<string, unknown>;
  sentAtFrame: number;
}

export interface AppliedCommand {
  args: Record<string, unknown>;
  result: Record<string, unknown>;
  frame: number;
}

export interface LastReply {
  id: CommandId;
  name: string;
  ok: boolean;
  error?: string;
  frame: number;
}

export interface TripBanner {
  t: number;
  uStar: number | null;
  violations: string[];
  /** Telemetry frame counter at the moment the trip event arrived. */
  frame: number;
}

export interface EventEntry {
  event: string;
  t: number;
  data: Record<string, unknown>;
}

export interface Snapshot {
  phase: SessionPhase;
  failureReason: string | null;
  serverVersion: string | null;
  scenario: string | null;
  paused: boolean | null;
  frame: number;
  sample: TelemetrySample | null;
  history: TelemetrySample[];
  banner: TripBanner | null;
  pending: PendingCommand[];
  applied: ReadonlyMap<string, AppliedCommand>;
  lastReply: LastReply | null;
  events: EventEntry[];
}

const EVENT_LOG_LIMIT = 50;

export class Session {
  private phase: SessionPhase = "connecting";
  private failureReason: string | null = null;
  private hello: ServerHello | null = null;
  private scenario: string | null = null;
  private paused: boolean | null = null;
  private frame = 0;
  private history: Ring<TelemetrySample>;
  private banner: TripBanner | null = null;
  private nextId = 1;
  private pending = new Map<CommandId, PendingCommand>();
  private applied = new Map<string, AppliedCommand>();
  private lastReply: LastReply | null = null;
  private events: EventEntry[] = [];

  constructor(
    private socket: SocketLike,
    private role: Role = "operator",
    historyLength = 600,
  ) {
    this.history = new Ring(historyLength);
    socket.onmessage = (data) => this.handleFrame(data);
    socket.onclose = () => {
      if (this.phase !== "failed") this.phase = "closed";
    };
  }

  /** Queue a command; returns its id.  Applied only on the ok reply. */
  sendCommand(name: string, args: Record<string, unknown> = {}): CommandId {
    if (this.phase !== "ready") {
      throw new ProtocolError(`cannot send in phase ${this.phase}`);
    }
    const id = this.nextId++;
    this.pending.set(id, { id, name, args, sentAtFrame: this.frame });
    this.socket.send(commandFrame(id, name, args));
    return id;
  }

  snapshot(): Snapshot {
    return {
      phase: this.phase,
      failureReason: this.failureReason,
      serverVersion: this.hello?.version ?? null,
      scenario: this.scenario,
      paused: this.paused,
      frame: this.frame,
      sample: this.history.last() ?? null,
      history: this.history.toArray(),
      banner: this.banner,
      pending: [...this.pending.values()],
      applied: this.applied,
      lastReply: this.lastReply,
      events: this.events.slice(),
    };
  }

  close(): void {
    this.socket.close();
  }

  private fail(reason: string): void {
    this.phase = "failed";
    this.failureReason = reason;
    this.socket.close();
  }

  private handleFrame(data: string): void {
    let msg;
    try {
      msg = parseServerMessage(data);
    } catch (exc) {
      this.fail(exc instanceof Error ? exc.message : String(exc));
      return;
    }
    if (this.phase === "connecting") {
      if (msg.kind !== "hello") {
        this.fail(`expected the server hello, got ${msg.kind}`);
        return;
      }
      if (msg.protocol_version !== PROTOCOL_VERSION) {
        this.fail(
          `protocol version mismatch: server ${msg.protocol_version}, ` +
            `console ${PROTOCOL_VERSION}`,
        );
        return;
      }
      this.hello = msg;
      this.scenario = msg.scenario;
      this.paused = msg.paused;
      this.socket.send(helloFrame(this.role));
      this.phase = "ready";
      return;
    }
    if (this.phase !== "ready") return;
    switch (msg.kind) {
      case "telemetry":
        this.frame += 1;
        this.history.push(msg.sample);
        break;
      case "command-reply":
        this.handleReply(msg);
        break;
      case "event":
        this.handleEvent(msg);
        break;
      case "hello":
        this.fail("server sent a second hello");
        break;
    }
  }

  private handleReply(msg: CommandReply): void {
    const pending = this.pending.get(msg.id);
    if (pending === undefined) return; // a reply we never asked for
    this.pending.delete(msg.id);
    this.lastReply = {
      id: msg.id,
      name: pending.name,
      ok: msg.ok,
      error: msg.error,
      frame: this.frame,
    };
    if (!msg.ok) return;
    const result = msg.result ?? {};
    this.applied.set(pending.name, {
      args: pending.args,
      result,
      frame: this.frame,
    });
    // lifecycle replies carry authoritative paused/scenario state
    if (typeof result["paused"] === "boolean") this.paused = result["paused"];
    if (typeof result["scenario"] === "string") this.scenario = result["scenario"];
  }

  private handleEvent(msg: EventMessage): void {
    // a hostile peer may omit t or data; normalize instead of throwing
    const t = typeof msg.t === "number" ? msg.t : 0;
    const data = msg.data ?? {};
    this.events.push({ event: msg.event, t, data });
    if (this.events.length > EVENT_LOG_LIMIT) {
      this.events.splice(0, this.events.length - EVENT_LOG_LIMIT);
    }
    switch (msg.event) {
      case "trip": {
        const uStar = data["u_star"];
        const violations = data["violations"];
        this.banner = {
          t,
          uStar: typeof uStar === "number" ? uStar : null,
          violations: Array.isArray(violations)
            ? violations.map(String)
            : [],
          frame: this.frame,
        };
        break;
      }
      case "reset":
        this.banner = null;
        break;
      case "scenario-loaded": {
        const name = data["scenario"];
        if (typeof name === "string") this.scenario = name;
        this.paused = true;
        this.history.clear();
        this.banner = null;
        break;
      }
      case "scenario-complete":
        this.paused = true;
        break;
      case "protocol-mismatch":
      case "protocol-error":
        this.fail(`${msg.event}: ${JSON.stringify(data)}`);
        break;
    }
  }
}
