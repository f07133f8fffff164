// Energy-history chart. All values come straight from the run report; the
// UI computes nothing itself.

import { EnergyEntry } from "./api.js";

export interface ChartPoint {
  x: number;
  y: number;
  value: number;
}

// Log-scale layout of one series inside a width x height box with margins.
export function layoutSeries(
  values: number[],
  width: number,
  height: number,
  margin = 28,
): ChartPoint[] {
  if (values.length === 0) return [];
  const floor = 1e-24;
  const logs = values.map((v) => Math.log10(Math.max(v, floor)));
  const lo = Math.min(...logs);
  const hi = Math.max(...logs);
  const span = hi - lo || 1;
  return values.map((v, k) => ({
    x: margin + ((width - 2 * margin) * k) / Math.max(values.length - 1, 1),
    y: height - margin - ((height - 2 * margin) * (logs[k] - lo)) / span,
    value: v,
  }));
}

export function drawEnergyChart(
  ctx: CanvasRenderingContext2D,
  history: EnergyEntry[],
): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  if (history.length === 0) return;
  const series: Array<{ key: "total" | "detail" | "projection"; color: string }> = [
    { key: "total", color: "#1565c0" },
    { key: "detail", color: "#2e7d32" },
    { key: "projection", color: "#c62828" },
  ];
  ctx.font = "11px sans-serif";
  series.forEach((s, si) => {
    const pts = layoutSeries(history.map((h) => h[s.key]), width, height);
    ctx.strokeStyle = s.color;
    ctx.fillStyle = s.color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    pts.forEach((p, k) => (k === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
    ctx.stroke();
    pts.forEach((p) => {
      ctx.beginPath();
      ctx.arc(p.x, p.y, 2.5, 0, 2 * Math.PI);
      ctx.fill();
    });
    ctx.fillText(s.key, 8 + si * 70, 12);
  });
  ctx.fillStyle = "#444";
  ctx.textAlign = "center";
  history.forEach((h, k) => {
    const x = 28 + ((width - 56) * k) / Math.max(history.length - 1, 1);
    ctx.fillText(String(h.iteration), x, height - 8);
  });
}
