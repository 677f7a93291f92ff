/**
 * Browser entry point: connect to the bench service, wire the control
 * strip to session commands, and repaint the dashboard every frame.
 *
 * Control values shown as active always come from telemetry or from
 * acknowledged replies; pressing a button only marks the command
 * pending until the server answers.
 */

import { drawDashboard } from "./dashboard.js";
import { Session, wrapWebSocket } from "./session.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function serviceUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("ws") ?? "ws://127.0.0.1:8765";
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("dashboard");
  const ctx = canvas.getContext("2d");
  if (ctx === null) throw new Error("canvas 2d context unavailable");

  const url = serviceUrl();
  el<HTMLSpanElement>("endpoint").textContent = url;
  const session = new Session(wrapWebSocket(new WebSocket(url)), "operator");

  const status = el<HTMLSpanElement>("command-status");
  const report = (action: () => unknown): void => {
    try {
      action();
      status.textContent = "sent, awaiting reply";
    } catch (exc) {
      status.textContent = exc instanceof Error ? exc.message : String(exc);
    }
  };

  el<HTMLButtonElement>("apply-wind").onclick = () =>
    report(() =>
      session.sendCommand("set_wind", {
        v: Number(el<HTMLInputElement>("wind").value),
      }),
    );
  el<HTMLButtonElement>("gust").onclick = () =>
    report(() =>
      session.sendCommand("inject_gust", { amplitude: 4.0, duration: 6.0 }),
    );
  el<HTMLButtonElement>("apply-mode").onclick = () =>
    report(() => {
      const mode = el<HTMLSelectElement>("mode").value;
      const args: Record<string, unknown> = { mode };
      if (mode !== "emulation") {
        args["setpoint"] = Number(el<HTMLInputElement>("setpoint").value);
      }
      return session.sendCommand("set_mode", args);
    });
  el<HTMLButtonElement>("trip-reset").onclick = () =>
    report(() => session.sendCommand("trip_reset"));
  el<HTMLButtonElement>("load").onclick = () =>
    report(() =>
      session.sendCommand("load_scenario", {
        name: el<HTMLInputElement>("scenario").value,
      }),
    );
  el<HTMLButtonElement>("start").onclick = () =>
    report(() => session.sendCommand("start"));
  el<HTMLButtonElement>("pause").onclick = () =>
    report(() => session.sendCommand("pause"));

  const paint = (): void => {
    const vm = session.snapshot();
    drawDashboard(ctx, vm, canvas.width, canvas.height);
    const reply = vm.lastReply;
    if (reply !== null) {
      status.textContent = reply.ok
        ? `${reply.name} applied (reply ${String(reply.id)})`
        : `${reply.name} refused: ${reply.error ?? "unknown error"}`;
    }
    const buttonsLive = vm.phase === "ready";
    document
      .querySelectorAll<HTMLButtonElement>("button")
      .forEach((b) => (b.disabled = !buttonsLive));
    requestAnimationFrame(paint);
  };
  requestAnimationFrame(paint);
}

main();
