/** Typed fetch client for the scene service. */

import type { JobDoc, OpAck, OpBody, RetextureRequest, SceneDoc } from "./types.js";

export class ServiceError extends Error {
  readonly status: number;
  readonly detail: string | string[];

  constructor(status: number, error: string, detail: string | string[]) {
    super(Array.isArray(detail) ? `${error}: ${detail.join("; ")}` : `${error}: ${detail}`);
    this.name = "ServiceError";
    this.status = status;
    this.detail = detail;
  }
}

async function raiseForStatus(resp: Response): Promise<void> {
  if (resp.ok) return;
  let error = `HTTP ${resp.status}`;
  let detail: string | string[] = resp.statusText;
  try {
    const body = (await resp.json()) as { error?: string; detail?: string | string[] };
    if (body && typeof body === "object") {
      error = body.error ?? error;
      detail = body.detail ?? detail;
    }
  } catch {
    // non-JSON error body, keep the status line
  }
  throw new ServiceError(resp.status, error, detail);
}

function versionHeader(resp: Response): number {
  return Number(resp.headers.get("X-Scene-Version") ?? "-1");
}

export interface SceneSnapshot {
  scene: SceneDoc;
  version: number;
}

export interface RenderResult {
  blob: Blob;
  version: number;
}

export class SceneServiceClient {
  readonly baseUrl: string;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  async fetchScene(): Promise<SceneSnapshot> {
    const resp = await fetch(`${this.baseUrl}/scene`);
    await raiseForStatus(resp);
    const version = versionHeader(resp);
    const scene = (await resp.json()) as SceneDoc;
    return { scene, version };
  }

  async postOp(op: OpBody): Promise<OpAck> {
    const resp = await fetch(`${this.baseUrl}/scene/ops`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(op),
    });
    await raiseForStatus(resp);
    return (await resp.json()) as OpAck;
  }

  async startRetexture(req: RetextureRequest): Promise<string> {
    const resp = await fetch(`${this.baseUrl}/scene/retexture`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
    await raiseForStatus(resp);
    const body = (await resp.json()) as { job_id: string };
    return body.job_id;
  }

  async fetchJob(jobId: string): Promise<JobDoc> {
    const resp = await fetch(`${this.baseUrl}/jobs/${encodeURIComponent(jobId)}`);
    await raiseForStatus(resp);
    return (await resp.json()) as JobDoc;
  }

  renderUrl(cameraSpec: string, width: number, height: number): string {
    const params = new URLSearchParams({ cam: cameraSpec, w: String(width), h: String(height) });
    return `${this.baseUrl}/render?${params}`;
  }

  /** Fetches a render plus the scene version it depicts. */
  async fetchRender(cameraSpec: string, width: number, height: number): Promise<RenderResult> {
    const resp = await fetch(this.renderUrl(cameraSpec, width, height));
    await raiseForStatus(resp);
    return { blob: await resp.blob(), version: versionHeader(resp) };
  }

  atlasUrl(objectId: string): string {
    return `${this.baseUrl}/objects/${encodeURIComponent(objectId)}/atlas`;
  }

  async fetchAtlas(objectId: string): Promise<Blob> {
    const resp = await fetch(this.atlasUrl(objectId));
    await raiseForStatus(resp);
    return resp.blob();
  }
}
