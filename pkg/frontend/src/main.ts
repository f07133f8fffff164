// Page wiring: two picking panes (image, mesh), pair list, run controls,
// result viewer with energy chart.

import { Client, RunReport, ServiceError } from "./api.js";
import { drawEnergyChart } from "./chart.js";
import { ParsedMesh, parseObj } from "./objParse.js";
import { ViewTransform, fitView, pairColor, pickVertex } from "./picking.js";
import { drawImagePane, drawTextured, drawWireframe } from "./renderMesh.js";
import { toSchemaDoc } from "./schema.js";
import { PairState } from "./state.js";

const client = new Client("");
const state = new PairState();

let sid = "";
let mesh: ParsedMesh | null = null;
let resultMesh: ParsedMesh | null = null;
let image: HTMLImageElement | null = null;
let imageSize = { width: 0, height: 0 };
let meshView: ViewTransform | null = null;
let resultView: ViewTransform | null = null;
let projected: Float64Array | null = null;
let imageScale = 1;
let running = false;

const $ = (id: string) => document.getElementById(id)!;
const imageCanvas = $("image-pane") as HTMLCanvasElement;
const meshCanvas = $("mesh-pane") as HTMLCanvasElement;
const originalCanvas = $("original-pane") as HTMLCanvasElement;
const resultCanvas = $("result-pane") as HTMLCanvasElement;
const chartCanvas = $("chart-pane") as HTMLCanvasElement;
const statusEl = $("status");
const pairListEl = $("pair-list");
const runButton = $("run-button") as HTMLButtonElement;

function setStatus(text: string, isError = false): void {
  statusEl.textContent = text;
  statusEl.className = isError ? "status error" : "status";
}

function redraw(): void {
  if (image) {
    const ctx = imageCanvas.getContext("2d")!;
    imageScale = drawImagePane(
      ctx, image, imageSize.width, imageSize.height, state.pairs, state.draft.pixel,
    ).scale;
  }
  if (mesh && meshView) {
    projected = drawWireframe(
      meshCanvas.getContext("2d")!, mesh, meshView, state.pairs, state.draft.vertex,
    );
  }
  renderPairList();
  runButton.disabled = !state.canRun || running;
  runButton.title = state.runDisabledReason ?? "";
}

function renderPairList(): void {
  pairListEl.innerHTML = "";
  state.pairs.forEach((pair, k) => {
    const li = document.createElement("li");
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = pairColor(k);
    swatch.textContent = String(k + 1);
    const label = document.createElement("span");
    label.textContent = ` v${pair.vertex} ↔ (${pair.pixel[0].toFixed(1)}, ${pair.pixel[1].toFixed(1)}) `;
    const del = document.createElement("button");
    del.textContent = "×";
    del.onclick = () => {
      state.deletePair(k);
      void pushPairs();
    };
    li.append(swatch, label, del);
    pairListEl.appendChild(li);
  });
}

async function pushPairs(): Promise<void> {
  redraw();
  if (state.pairs.length === 0) return;
  try {
    await client.putCorrespondences(sid, toSchemaDoc(state.pairs, imageSize.width, imageSize.height));
    setStatus(`${state.pairs.length} pair(s) saved`);
  } catch (err) {
    setStatus(errText(err), true);
  }
}

function errText(err: unknown): string {
  if (err instanceof ServiceError) {
    return err.status === 409 ? "run in progress" : `server: ${err.message}`;
  }
  return String(err);
}

imageCanvas.addEventListener("click", (ev) => {
  if (!image) return;
  const rect = imageCanvas.getBoundingClientRect();
  const x = (ev.clientX - rect.left) / imageScale;
  const y = (ev.clientY - rect.top) / imageScale;
  if (x < 0 || y < 0 || x > imageSize.width || y > imageSize.height) return;
  if (state.clickImage(x, y)) void pushPairs();
  else redraw();
});

meshCanvas.addEventListener("click", (ev) => {
  if (!projected) return;
  const rect = meshCanvas.getBoundingClientRect();
  const hit = pickVertex(projected, ev.clientX - rect.left, ev.clientY - rect.top);
  if (hit < 0) return;
  if (state.clickVertex(hit)) void pushPairs();
  else redraw();
});

let dragging = false;
let lastX = 0;
let lastY = 0;
meshCanvas.addEventListener("mousedown", (ev) => {
  dragging = true;
  lastX = ev.clientX;
  lastY = ev.clientY;
});
window.addEventListener("mouseup", () => (dragging = false));
window.addEventListener("mousemove", (ev) => {
  if (!dragging || !meshView) return;
  meshView.yaw += (ev.clientX - lastX) * 0.01;
  meshView.pitch += (ev.clientY - lastY) * 0.01;
  lastX = ev.clientX;
  lastY = ev.clientY;
  redraw();
  if (resultMesh && resultView && image) {
    resultView.yaw = meshView.yaw;
    resultView.pitch = meshView.pitch;
    drawResultPanes();
  }
});

$("clear-draft").onclick = () => {
  state.clearDraft();
  redraw();
};

$("export-button").onclick = async () => {
  try {
    const blob = await client.getCorrespondencesRaw(sid);
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "correspondences.json";
    a.click();
    URL.revokeObjectURL(a.href);
  } catch (err) {
    setStatus(errText(err), true);
  }
};

function sliderValue(id: string): number {
  return Number(($(id) as HTMLInputElement).value);
}

runButton.onclick = async () => {
  running = true;
  redraw();
  setStatus("running…");
  try {
    const report = await client.run(sid, {
      alpha: sliderValue("alpha"),
      beta: sliderValue("beta"),
      eps: sliderValue("eps"),
      tol: sliderValue("tol"),
    });
    await showResult(report);
  } catch (err) {
    setStatus(errText(err), true);
  } finally {
    running = false;
    redraw();
  }
};

async function showResult(report: RunReport): Promise<void> {
  const objText = await client.fetchResultMesh(sid);
  resultMesh = parseObj(objText);
  resultView = fitView(resultMesh.positions, resultCanvas.width, resultCanvas.height,
    meshView?.yaw ?? 0.6, meshView?.pitch ?? 0.4);
  drawResultPanes();
  drawEnergyChart(chartCanvas.getContext("2d")!, report.energy_history);
  const e = report.energy;
  setStatus(
    `${report.converged ? "converged" : "stopped"} after ${report.iterations} iteration(s); ` +
      `energy total ${e.total.toExponential(3)} ` +
      `(detail ${e.detail.toExponential(3)}, projection ${e.projection.toExponential(3)}); ` +
      `${report.uv_out_of_image} vertex UV(s) outside the image`,
  );
}

function drawResultPanes(): void {
  if (!mesh || !meshView || !image) return;
  drawWireframe(originalCanvas.getContext("2d")!,
    mesh,
    { ...meshView, centerX: originalCanvas.width / 2, centerY: originalCanvas.height / 2,
      scale: meshView.scale * (originalCanvas.width / meshCanvas.width) },
    [], null);
  if (resultMesh && resultView) {
    drawTextured(resultCanvas.getContext("2d")!, resultMesh, resultView, image,
      imageSize.width, imageSize.height);
  }
}

async function boot(): Promise<void> {
  try {
    sid = await client.createSession();
    const [objText, blob] = await Promise.all([client.fetchMesh(sid), client.fetchImageBlob(sid)]);
    mesh = parseObj(objText);
    meshView = fitView(mesh.positions, meshCanvas.width, meshCanvas.height);
    image = new Image();
    await new Promise((resolve, reject) => {
      image!.onload = resolve;
      image!.onerror = reject;
      image!.src = URL.createObjectURL(blob);
    });
    imageSize = { width: image.naturalWidth, height: image.naturalHeight };
    setStatus(
      `session ${sid.slice(0, 8)} — ${mesh.vertexCount} vertices, ` +
        `image ${imageSize.width}×${imageSize.height}; ` +
        "click a point on the image, then its vertex on the mesh",
    );
    redraw();
  } catch (err) {
    setStatus(`no session: ${errText(err)}`, true);
  }
}

void boot();
