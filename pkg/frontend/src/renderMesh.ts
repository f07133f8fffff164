// Canvas renderers: wireframe with pickable vertices for the input mesh,
// and an affine per-triangle textured painter for results.

import { ParsedMesh } from "./objParse.js";
import { ViewTransform, pairColor, projectVertices } from "./picking.js";
import { Pair } from "./schema.js";

export function drawWireframe(
  ctx: CanvasRenderingContext2D,
  mesh: ParsedMesh,
  view: ViewTransform,
  pairs: Pair[],
  pendingVertex: number | null,
): Float64Array {
  const proj = projectVertices(mesh.positions, view);
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.strokeStyle = "#97a4b5";
  ctx.lineWidth = 0.5;
  ctx.beginPath();
  for (let f = 0; f < mesh.faceCount; f++) {
    const a = mesh.faces[3 * f];
    const b = mesh.faces[3 * f + 1];
    const c = mesh.faces[3 * f + 2];
    ctx.moveTo(proj[3 * a], proj[3 * a + 1]);
    ctx.lineTo(proj[3 * b], proj[3 * b + 1]);
    ctx.lineTo(proj[3 * c], proj[3 * c + 1]);
    ctx.closePath();
  }
  ctx.stroke();
  pairs.forEach((pair, k) => {
    drawMarker(ctx, proj[3 * pair.vertex], proj[3 * pair.vertex + 1], pairColor(k), String(k + 1));
  });
  if (pendingVertex !== null) {
    drawMarker(ctx, proj[3 * pendingVertex], proj[3 * pendingVertex + 1], "#222", "?");
  }
  return proj;
}

export function drawImagePane(
  ctx: CanvasRenderingContext2D,
  image: CanvasImageSource,
  imageWidth: number,
  imageHeight: number,
  pairs: Pair[],
  pendingPixel: [number, number] | null,
): { scale: number } {
  const scale = Math.min(ctx.canvas.width / imageWidth, ctx.canvas.height / imageHeight);
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  ctx.drawImage(image, 0, 0, imageWidth * scale, imageHeight * scale);
  pairs.forEach((pair, k) => {
    drawMarker(ctx, pair.pixel[0] * scale, pair.pixel[1] * scale, pairColor(k), String(k + 1));
  });
  if (pendingPixel) {
    drawMarker(ctx, pendingPixel[0] * scale, pendingPixel[1] * scale, "#222", "?");
  }
  return { scale };
}

function drawMarker(
  ctx: CanvasRenderingContext2D,
  x: number,
  y: number,
  color: string,
  label: string,
): void {
  ctx.fillStyle = color;
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.arc(x, y, 6, 0, 2 * Math.PI);
  ctx.fill();
  ctx.stroke();
  ctx.fillStyle = "#ffffff";
  ctx.font = "bold 8px sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText(label, x, y);
}

// Painter's algorithm with per-triangle affine texture mapping: each screen
// triangle is clipped and the texture drawn under the affine map taking the
// triangle's UV pixels onto it.
export function drawTextured(
  ctx: CanvasRenderingContext2D,
  mesh: ParsedMesh,
  view: ViewTransform,
  texture: CanvasImageSource,
  textureWidth: number,
  textureHeight: number,
): void {
  const proj = projectVertices(mesh.positions, view);
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  if (!mesh.uvs) return;
  const order = [...Array(mesh.faceCount).keys()];
  const depth = (f: number) =>
    (proj[3 * mesh.faces[3 * f] + 2] +
      proj[3 * mesh.faces[3 * f + 1] + 2] +
      proj[3 * mesh.faces[3 * f + 2] + 2]) /
    3;
  order.sort((a, b) => depth(a) - depth(b)); // far to near
  for (const f of order) {
    const ia = mesh.faces[3 * f];
    const ib = mesh.faces[3 * f + 1];
    const ic = mesh.faces[3 * f + 2];
    // UVs are stored as image fractions with top-left origin
    const u0 = mesh.uvs[2 * ia] * textureWidth;
    const v0 = mesh.uvs[2 * ia + 1] * textureHeight;
    const u1 = mesh.uvs[2 * ib] * textureWidth;
    const v1 = mesh.uvs[2 * ib + 1] * textureHeight;
    const u2 = mesh.uvs[2 * ic] * textureWidth;
    const v2 = mesh.uvs[2 * ic + 1] * textureHeight;
    const x0 = proj[3 * ia];
    const y0 = proj[3 * ia + 1];
    const x1 = proj[3 * ib];
    const y1 = proj[3 * ib + 1];
    const x2 = proj[3 * ic];
    const y2 = proj[3 * ic + 1];
    const den = (u1 - u0) * (v2 - v0) - (u2 - u0) * (v1 - v0);
    if (Math.abs(den) < 1e-12) continue;
    const a = ((x1 - x0) * (v2 - v0) - (x2 - x0) * (v1 - v0)) / den;
    const b = ((x2 - x0) * (u1 - u0) - (x1 - x0) * (u2 - u0)) / den;
    const c = ((y1 - y0) * (v2 - v0) - (y2 - y0) * (v1 - v0)) / den;
    const d = ((y2 - y0) * (u1 - u0) - (y1 - y0) * (u2 - u0)) / den;
    const e = x0 - a * u0 - b * v0;
    const g = y0 - c * u0 - d * v0;
    ctx.save();
    ctx.beginPath();
    ctx.moveTo(x0, y0);
    ctx.lineTo(x1, y1);
    ctx.lineTo(x2, y2);
    ctx.closePath();
    ctx.clip();
    ctx.transform(a, c, b, d, e, g);
    ctx.drawImage(texture, 0, 0);
    ctx.restore();
  }
}

// Coefficients of the affine map used above, exposed for testing.
export function textureTriangleTransform(
  uv: [number, number, number, number, number, number],
  xy: [number, number, number, number, number, number],
): [number, number, number, number, number, number] | null {
  const [u0, v0, u1, v1, u2, v2] = uv;
  const [x0, y0, x1, y1, x2, y2] = xy;
  const den = (u1 - u0) * (v2 - v0) - (u2 - u0) * (v1 - v0);
  if (Math.abs(den) < 1e-12) return null;
  const a = ((x1 - x0) * (v2 - v0) - (x2 - x0) * (v1 - v0)) / den;
  const b = ((x2 - x0) * (u1 - u0) - (x1 - x0) * (u2 - u0)) / den;
  const c = ((y1 - y0) * (v2 - v0) - (y2 - y0) * (v1 - v0)) / den;
  const d = ((y2 - y0) * (u1 - u0) - (y1 - y0) * (u2 - u0)) / den;
  return [a, b, c, d, x0 - a * u0 - b * v0, y0 - c * u0 - d * v0];
}
