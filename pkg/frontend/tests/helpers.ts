import { Canvas2DLike } from "../src/dashboard.js";
import { Role, TelemetrySample } from "../src/protocol.js";
import { FakeSocket, Session, Snapshot } from "../src/session.js";

export function sample(overrides: Partial<TelemetrySample> = {}): TelemetrySample {
  return {
    t: 0.0,
    v: 8.0,
    omega: 9.572,
    rpm: 91.4,
    tsr: 2.991,
    t_ref: 109.5,
    t_applied: 109.5,
    p_wt: 1048.2,
    p_est: 838.5,
    p_exported: 838.5,
    u_star: 581.9,
    level_code: 2,
    mode: "emulation",
    trip_latched: false,
    violations: [],
    ...overrides,
  };
}

export const SERVER_HELLO = {
  kind: "hello",
  protocol_version: 1,
  server: "windbench",
  version: "0.1.0",
  scenario: "const8",
  paused: false,
};

/** A session taken through the handshake, ready for commands. */
export function connect(
  role: Role = "operator",
  historyLength = 600,
): { session: Session; sock: FakeSocket } {
  const sock = new FakeSocket();
  const session = new Session(sock, role, historyLength);
  sock.deliver(SERVER_HELLO);
  return { session, sock };
}

export function makeSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    phase: "ready",
    failureReason: null,
    serverVersion: "0.1.0",
    scenario: "const8",
    paused: false,
    frame: 0,
    sample: null,
    history: [],
    banner: null,
    pending: [],
    applied: new Map(),
    lastReply: null,
    events: [],
    ...overrides,
  };
}

export interface RectCall {
  x: number;
  y: number;
  w: number;
  h: number;
  style: string;
}

/** Canvas stand-in that records what the painter drew. */
export class RecordingContext implements Canvas2DLike {
  fillStyle: string | CanvasGradient | CanvasPattern = "";
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  lineWidth = 0;
  font = "";
  texts: string[] = [];
  rects: RectCall[] = [];
  strokes = 0;

  fillRect(x: number, y: number, w: number, h: number): void {
    this.rects.push({ x, y, w, h, style: String(this.fillStyle) });
  }

  strokeRect(_x: number, _y: number, _w: number, _h: number): void {}

  fillText(text: string, _x: number, _y: number): void {
    this.texts.push(text);
  }

  beginPath(): void {}

  moveTo(_x: number, _y: number): void {}

  lineTo(_x: number, _y: number): void {}

  stroke(): void {
    this.strokes += 1;
  }
}
