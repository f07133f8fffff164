// Thin client for the session service. The UI never computes geometry or
// energies; everything it displays comes from these endpoints.

import { CorrespondenceDoc } from "./schema.js";

export interface RunParams {
  alpha?: number;
  beta?: number;
  eps?: number;
  tol?: number;
  max_iters?: number;
}

export interface EnergyEntry {
  iteration: number;
  detail: number;
  projection: number;
  total: number;
}

export interface RunReport {
  iterations: number;
  converged: boolean;
  uv_out_of_image: number;
  energy: { detail: number; projection: number; total: number };
  energy_history: EnergyEntry[];
  [key: string]: unknown;
}

export class ServiceError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function fail(resp: Response): Promise<never> {
  let detail = resp.statusText;
  try {
    const body = await resp.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ServiceError(resp.status, detail);
}

export class Client {
  constructor(readonly base: string = "") {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async createSession(): Promise<string> {
    const resp = await fetch(this.url("/session"), { method: "POST" });
    if (!resp.ok) await fail(resp);
    return (await resp.json()).id;
  }

  async fetchMesh(sid: string): Promise<string> {
    const resp = await fetch(this.url(`/session/${sid}/mesh`));
    if (!resp.ok) await fail(resp);
    return resp.text();
  }

  async fetchImageBlob(sid: string): Promise<Blob> {
    const resp = await fetch(this.url(`/session/${sid}/image`));
    if (!resp.ok) await fail(resp);
    return resp.blob();
  }

  async putCorrespondences(sid: string, doc: CorrespondenceDoc): Promise<void> {
    const resp = await fetch(this.url(`/session/${sid}/correspondences`), {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    });
    if (!resp.ok) await fail(resp);
  }

  // Raw server bytes so an export is byte-equal to what GET returns.
  async getCorrespondencesRaw(sid: string): Promise<Blob> {
    const resp = await fetch(this.url(`/session/${sid}/correspondences`));
    if (!resp.ok) await fail(resp);
    return resp.blob();
  }

  async run(sid: string, params: RunParams): Promise<RunReport> {
    const resp = await fetch(this.url(`/session/${sid}/run`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(params),
    });
    if (!resp.ok) await fail(resp);
    return resp.json();
  }

  async fetchResultMesh(sid: string): Promise<string> {
    const resp = await fetch(this.url(`/session/${sid}/result/mesh`));
    if (!resp.ok) await fail(resp);
    return resp.text();
  }

  async fetchResultReport(sid: string): Promise<RunReport> {
    const resp = await fetch(this.url(`/session/${sid}/result/report`));
    if (!resp.ok) await fail(resp);
    return resp.json();
  }
}
