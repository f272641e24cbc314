/** Job polling helper for long-running service work. */

import type { SceneServiceClient } from "./api.js";
import type { JobDoc } from "./types.js";

/** Polls until the job reaches DONE or FAILED, reporting each snapshot. */
export function pollJob(
  client: SceneServiceClient,
  jobId: string,
  onProgress: ((job: JobDoc) => void) | null = null,
  intervalMs = 1000,
): Promise<JobDoc> {
  return new Promise((resolve, reject) => {
    let busy = false;
    const timer = setInterval(async () => {
      if (busy) return; // skip the tick if the last request is still out
      busy = true;
      let job: JobDoc;
      try {
        job = await client.fetchJob(jobId);
      } catch (err) {
        clearInterval(timer);
        reject(err);
        return;
      } finally {
        busy = false;
      }
      onProgress?.(job);
      if (job.state === "DONE" || job.state === "FAILED") {
        clearInterval(timer);
        resolve(job);
      }
    }, intervalMs);
  });
}
