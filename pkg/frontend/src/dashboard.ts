/**
 * Dashboard rendering: pure view-model helpers plus a thin canvas
 * painter.  Everything numeric lives in the helpers so tests cover
 * the layout math without a DOM.
 */

import { TelemetrySample } from "./protocol.js";
import { Snapshot, TripBanner } from "./session.js";

/** Map a series onto canvas coordinates, newest point at the right. */
export function scaleSeries(
  values: number[],
  width: number,
  height: number,
  lo?: number,
  hi?: number,
): Array<[number, number]> {
  if (values.length === 0) return [];
  let min = lo ?? Math.min(...values);
  let max = hi ?? Math.max(...values);
  if (min === max) {
    // a flat series sits mid-panel instead of hugging an edge
    min -= 1;
    max += 1;
  }
  const n = values.length;
  const dx = n > 1 ? width / (n - 1) : 0;
  return values.map((value, i) => {
    const y = height - ((value - min) / (max - min)) * height;
    return [i * dx, y];
  });
}

/** Decode the 4-bit exported-power level, least significant bit first. */
export function levelBars(levelCode: number): [boolean, boolean, boolean, boolean] {
  const code = Math.max(0, Math.min(15, Math.trunc(levelCode)));
  return [
    (code & 1) !== 0,
    (code & 2) !== 0,
    (code & 4) !== 0,
    (code & 8) !== 0,
  ];
}

export function bannerText(banner: TripBanner): string {
  const parts = [`TRIP at t=${banner.t.toFixed(3)} s`];
  if (banner.uStar !== null) {
    parts.push(`u*=${banner.uStar.toFixed(1)} V`);
  }
  parts.push(
    banner.violations.length > 0
      ? banner.violations.join(", ")
      : "overvoltage comparator",
  );
  return parts.join(" | ");
}

export function formatSample(sample: TelemetrySample): string[] {
  return [
    `t       ${sample.t.toFixed(2)} s`,
    `wind    ${sample.v.toFixed(2)} m/s`,
    `omega   ${sample.omega.toFixed(3)} rad/s (${sample.rpm.toFixed(1)} rpm)`,
    `tsr     ${sample.tsr.toFixed(3)}`,
    `T ref   ${sample.t_ref.toFixed(1)} N·m, applied ${sample.t_applied.toFixed(1)} N·m`,
    `P rotor ${sample.p_wt.toFixed(1)} W, est ${sample.p_est.toFixed(1)} W`,
    `P out   ${sample.p_exported.toFixed(1)} W`,
    `DC bus  ${sample.u_star.toFixed(1)} V`,
    `mode    ${sample.mode}`,
  ];
}

/** The subset of CanvasRenderingContext2D the painter needs. */
export interface Canvas2DLike {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
}

const COLORS = {
  bg: "#10151c",
  panel: "#1a222e",
  frame: "#2c3a4d",
  text: "#c7d4e4",
  dim: "#6c7c91",
  wind: "#58a6ff",
  omega: "#7ee787",
  power: "#ffa657",
  est: "#8b949e",
  bus: "#d2a8ff",
  trip: "#f85149",
  ok: "#238636",
};

interface Panel {
  x: number;
  y: number;
  w: number;
  h: number;
}

function drawPanel(ctx: Canvas2DLike, p: Panel, title: string): void {
  ctx.fillStyle = COLORS.panel;
  ctx.fillRect(p.x, p.y, p.w, p.h);
  ctx.strokeStyle = COLORS.frame;
  ctx.lineWidth = 1;
  ctx.strokeRect(p.x, p.y, p.w, p.h);
  ctx.fillStyle = COLORS.dim;
  ctx.font = "11px ui-monospace, monospace";
  ctx.fillText(title, p.x + 8, p.y + 14);
}

function drawSeries(
  ctx: Canvas2DLike,
  panel: Panel,
  values: number[],
  color: string,
  lo?: number,
  hi?: number,
): void {
  const inset = 8;
  const points = scaleSeries(
    values,
    panel.w - 2 * inset,
    panel.h - 24 - inset,
    lo,
    hi,
  );
  if (points.length < 2) return;
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  points.forEach(([x, y], i) => {
    if (i === 0) ctx.moveTo(panel.x + inset + x, panel.y + 20 + y);
    else ctx.lineTo(panel.x + inset + x, panel.y + 20 + y);
  });
  ctx.stroke();
}

/** Paint one frame of the console from a session snapshot. */
export function drawDashboard(
  ctx: Canvas2DLike,
  vm: Snapshot,
  width: number,
  height: number,
): void {
  ctx.fillStyle = COLORS.bg;
  ctx.fillRect(0, 0, width, height);

  const bannerH = 34;
  ctx.fillStyle = vm.banner ? COLORS.trip : COLORS.ok;
  ctx.fillRect(0, 0, width, bannerH);
  ctx.fillStyle = "#ffffff";
  ctx.font = "bold 14px ui-monospace, monospace";
  if (vm.banner) {
    ctx.fillText(bannerText(vm.banner), 12, 22);
  } else {
    const state =
      vm.phase !== "ready"
        ? vm.phase + (vm.failureReason ? `: ${vm.failureReason}` : "")
        : vm.paused
          ? "paused"
          : "running";
    ctx.fillText(
      `scenario ${vm.scenario ?? "-"} | ${state} | frame ${vm.frame}`,
      12,
      22,
    );
  }

  const gap = 10;
  const readoutH = 150;
  const chartW = (width - 3 * gap) / 2;
  const chartH = Math.max(40, (height - bannerH - readoutH - 3 * gap) / 2);
  const history = vm.history;
  const panels: Array<[string, (s: TelemetrySample) => number, string, number?, number?]> = [
    ["wind m/s", (s) => s.v, COLORS.wind, 0, undefined],
    ["omega rad/s", (s) => s.omega, COLORS.omega, 0, undefined],
    ["power W (exported, est)", (s) => s.p_exported, COLORS.power, 0, undefined],
    ["dc bus V", (s) => s.u_star, COLORS.bus, undefined, undefined],
  ];
  panels.forEach(([title, pick, color, lo, hi], i) => {
    const panel: Panel = {
      x: gap + (i % 2) * (chartW + gap),
      y: bannerH + gap + Math.floor(i / 2) * (chartH + gap),
      w: chartW,
      h: chartH,
    };
    drawPanel(ctx, panel, title);
    drawSeries(ctx, panel, history.map(pick), color, lo, hi);
    if (title.startsWith("power")) {
      drawSeries(ctx, panel, history.map((s) => s.p_est), COLORS.est, lo, hi);
    }
  });

  // readout column under the charts when there is room
  const sample = vm.sample;
  if (sample !== null) {
    ctx.fillStyle = COLORS.text;
    ctx.font = "12px ui-monospace, monospace";
    const lines = formatSample(sample);
    const baseY = bannerH + 2 * gap + 2 * chartH + 14;
    lines.forEach((line, i) => {
      if (baseY + i * 15 < height - 4) {
        ctx.fillText(line, gap + 2, baseY + i * 15);
      }
    });
    const bars = levelBars(sample.level_code);
    bars.forEach((on, i) => {
      ctx.fillStyle = on ? COLORS.power : COLORS.frame;
      ctx.fillRect(width - gap - 4 * 18 + i * 18, height - 24, 14, 14);
    });
  }
}
