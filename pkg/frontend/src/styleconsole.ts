/** Restyle console: prompt and seed in, retexture job out, progress polled
 * once a second until the job lands.
 */

import type { SceneServiceClient } from "./api.js";
import { pollJob } from "./jobs.js";
import type { UiSceneModel } from "./model.js";
import type { JobDoc, RetextureRequest } from "./types.js";

/** Kick off a retexture and follow it to a terminal state. */
export async function runRetexture(
  client: SceneServiceClient,
  req: RetextureRequest,
  onProgress: ((job: JobDoc) => void) | null = null,
  intervalMs = 1000,
): Promise<JobDoc> {
  const jobId = await client.startRetexture(req);
  return pollJob(client, jobId, onProgress, intervalMs);
}

export interface StyleConsoleElements {
  promptInput: HTMLInputElement;
  seedInput: HTMLInputElement;
  selectedOnly: HTMLInputElement;
  startButton: HTMLButtonElement;
  progressLine: HTMLElement;
  thumbnailStrip: HTMLElement;
}

export class StyleConsole {
  private readonly client: SceneServiceClient;
  private readonly model: UiSceneModel;
  private readonly el: StyleConsoleElements;

  /** Called after a job lands DONE so the shell refreshes scene and renders. */
  onDone: (() => Promise<void>) | null = null;

  constructor(client: SceneServiceClient, model: UiSceneModel, el: StyleConsoleElements) {
    this.client = client;
    this.model = model;
    this.el = el;
    this.el.startButton.addEventListener("click", () => void this.start());
  }

  async start(): Promise<void> {
    if (this.model.pendingJobId) return; // one job at a time
    const req: RetextureRequest = {};
    const prompt = this.el.promptInput.value.trim();
    if (prompt) req.prompt = prompt;
    const seed = Number.parseInt(this.el.seedInput.value, 10);
    if (Number.isFinite(seed)) req.seed = seed;
    if (this.el.selectedOnly.checked && this.model.selectedId) {
      req.objects = [this.model.selectedId];
    }

    this.el.startButton.disabled = true;
    this.el.progressLine.textContent = "submitting...";
    try {
      const jobId = await this.client.startRetexture(req);
      this.model.pendingJobId = jobId;
      const job = await pollJob(this.client, jobId, (j) => this.showProgress(j));
      if (job.state === "DONE") {
        this.el.progressLine.textContent = "done";
        await this.onDone?.();
        this.refreshThumbnails();
      } else {
        this.el.progressLine.textContent = `failed: ${job.error ?? "unknown error"}`;
      }
    } catch (err) {
      this.el.progressLine.textContent = err instanceof Error ? err.message : String(err);
    } finally {
      this.model.pendingJobId = null;
      this.el.startButton.disabled = false;
    }
  }

  private showProgress(job: JobDoc): void {
    const p = job.progress;
    this.el.progressLine.textContent = `${job.state.toLowerCase()}: ${p.done_views} / ${p.total_views} views`;
  }

  /** Atlas thumbnails, cache-busted by scene version so repaints show up. */
  refreshThumbnails(): void {
    const strip = this.el.thumbnailStrip;
    strip.replaceChildren();
    for (const rec of this.model.objects) {
      const fig = document.createElement("figure");
      const img = document.createElement("img");
      img.src = `${this.client.atlasUrl(rec.id)}?v=${this.model.sceneVersion}`;
      img.alt = `${rec.id} atlas`;
      img.width = 64;
      img.height = 64;
      const cap = document.createElement("figcaption");
      cap.textContent = rec.id;
      fig.append(img, cap);
      strip.append(fig);
    }
  }
}
