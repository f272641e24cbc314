"""Background jobs with a single worker per scene."""

from __future__ import annotations

import logging
import queue
import threading
import uuid
from dataclasses import dataclass, field

log = logging.getLogger(__name__)

QUEUED = "QUEUED"
RUNNING = "RUNNING"
DONE = "DONE"
FAILED = "FAILED"

RETEXTURE = "RETEXTURE"
REFERENCE = "REFERENCE"
RENDER = "RENDER"

_TRANSITIONS = {QUEUED: {RUNNING}, RUNNING: {DONE, FAILED}, DONE: set(), FAILED: set()}


@dataclass
class Job:
    job_id: str
    kind: str
    state: str = QUEUED
    done_views: int = 0
    total_views: int = 0
    error: str | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def _move(self, state: str):
        with self._lock:
            if state not in _TRANSITIONS[self.state]:
                raise RuntimeError(f"job cannot go {self.state} -> {state}")
            self.state = state

    def tick(self):
        with self._lock:
            self.done_views += 1

    def to_doc(self) -> dict:
        with self._lock:
            return {
                "job_id": self.job_id,
                "kind": self.kind,
                "state": self.state,
                "progress": {"done_views": self.done_views, "total_views": self.total_views},
                "error": self.error,
            }


class JobRegistry:
    """Holds job state and runs submitted work on one worker thread."""

    def __init__(self):
        self._jobs: dict[str, Job] = {}
        self._queue: queue.Queue = queue.Queue()
        self._lock = threading.Lock()
        self._worker = threading.Thread(target=self._run, daemon=True, name="scene-jobs")
        self._worker.start()

    def submit(self, kind: str, fn, total_views: int = 0) -> Job:
        job = Job(job_id=uuid.uuid4().hex[:12], kind=kind, total_views=total_views)
        with self._lock:
            self._jobs[job.job_id] = job
        self._queue.put((job, fn))
        return job

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

    def _run(self):
        while True:
            job, fn = self._queue.get()
            job._move(RUNNING)
            try:
                fn(job)
            except Exception as exc:
                log.exception("job %s failed", job.job_id)
                job.error = str(exc)
                job._move(FAILED)
            else:
                job._move(DONE)
            finally:
                self._queue.task_done()
