// Vertex picking: clicks snap to the nearest projected vertex within a
// fixed pixel radius. Correspondences are per-vertex, so face raycasts are
// unnecessary.

export const PICK_RADIUS_PX = 8;

export interface ViewTransform {
  yaw: number; // radians, rotation about the model's y axis
  pitch: number; // radians, rotation about the model's x axis
  scale: number; // model units -> canvas px
  centerX: number; // canvas px
  centerY: number;
  modelCenter: [number, number, number];
}

// Returns per-vertex screen coordinates plus view-space depth (larger = closer).
export function projectVertices(positions: Float64Array, view: ViewTransform): Float64Array {
  const n = positions.length / 3;
  const out = new Float64Array(3 * n);
  const cy = Math.cos(view.yaw);
  const sy = Math.sin(view.yaw);
  const cp = Math.cos(view.pitch);
  const sp = Math.sin(view.pitch);
  const [mx, my, mz] = view.modelCenter;
  for (let i = 0; i < n; i++) {
    const x = positions[3 * i] - mx;
    const y = positions[3 * i + 1] - my;
    const z = positions[3 * i + 2] - mz;
    const x1 = cy * x + sy * z;
    const z1 = -sy * x + cy * z;
    const y2 = cp * y - sp * z1;
    const z2 = sp * y + cp * z1;
    out[3 * i] = view.centerX + view.scale * x1;
    out[3 * i + 1] = view.centerY - view.scale * y2;
    out[3 * i + 2] = z2;
  }
  return out;
}

export function fitView(
  positions: Float64Array,
  width: number,
  height: number,
  yaw = 0.6,
  pitch = 0.4,
): ViewTransform {
  const n = positions.length / 3;
  const lo = [Infinity, Infinity, Infinity];
  const hi = [-Infinity, -Infinity, -Infinity];
  for (let i = 0; i < n; i++) {
    for (let c = 0; c < 3; c++) {
      const v = positions[3 * i + c];
      if (v < lo[c]) lo[c] = v;
      if (v > hi[c]) hi[c] = v;
    }
  }
  const diag = Math.hypot(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]) || 1;
  return {
    yaw,
    pitch,
    scale: (0.85 * Math.min(width, height)) / diag,
    centerX: width / 2,
    centerY: height / 2,
    modelCenter: [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2],
  };
}

// Nearest projected vertex within the pick radius, or -1.
export function pickVertex(
  projected: Float64Array,
  clickX: number,
  clickY: number,
  radius = PICK_RADIUS_PX,
): number {
  const n = projected.length / 3;
  let best = -1;
  let bestD2 = radius * radius;
  for (let i = 0; i < n; i++) {
    const dx = projected[3 * i] - clickX;
    const dy = projected[3 * i + 1] - clickY;
    const d2 = dx * dx + dy * dy;
    if (d2 <= bestD2) {
      bestD2 = d2;
      best = i;
    }
  }
  return best;
}

export function pairColor(index: number): string {
  // stable, well-separated hues; identical numbering in both panes
  const hue = (index * 137.508) % 360;
  return `hsl(${hue.toFixed(1)}, 85%, 55%)`;
}
