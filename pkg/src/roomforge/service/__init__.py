from .app import SceneState, create_app, serve
from .jobs import DONE, FAILED, QUEUED, RETEXTURE, RUNNING, Job, JobRegistry

__all__ = [
    "DONE",
    "FAILED",
    "QUEUED",
    "RETEXTURE",
    "RUNNING",
    "Job",
    "JobRegistry",
    "SceneState",
    "create_app",
    "serve",
]
