"""Exception hierarchy for the whole engine.

Every error raised by roomforge derives from RoomforgeError so callers can
catch at whatever granularity they need.
"""


class RoomforgeError(Exception):
    """Base class for all roomforge errors."""


# ---------------------------------------------------------------------------
# geometry / file I/O
# ---------------------------------------------------------------------------

class MalformedFile(RoomforgeError):
    """Input file could not be parsed."""


class MissingUVs(MalformedFile):
    """OBJ file carries no vt records; meshes must arrive UV-unwrapped."""


class EmptyMesh(RoomforgeError):
    """Operation requires at least one face/vertex."""


class IoError(RoomforgeError):
    """Filesystem-level failure while saving or loading a project."""


class SchemaVersionMismatch(RoomforgeError):
    """scene.json was written by an unknown pipeline version."""


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

class DegenerateCamera(RoomforgeError):
    """Camera violates its invariants (look // up, near >= far, bad fov)."""


# ---------------------------------------------------------------------------
# diffusion
# ---------------------------------------------------------------------------

class InvalidRange(RoomforgeError):
    """Noise-schedule parameters outside their legal range."""


class ShapeMismatch(RoomforgeError):
    """Array arguments disagree in shape."""


class NonBinaryMask(RoomforgeError):
    """Blend mask contains values other than 0 and 1."""


# ---------------------------------------------------------------------------
# synthesis backends
# ---------------------------------------------------------------------------

class BackendError(RoomforgeError):
    """Base class for texture-synthesizer backend failures."""


class BackendUnavailable(BackendError):
    """Backend could not be reached."""


class Timeout(BackendError):
    """Backend did not answer within the configured timeout."""


class ProtocolError(BackendError):
    """Backend answered outside the wire contract (bad status, bad body)."""


class DimensionMismatch(BackendError):
    """Backend returned an image whose size differs from the request."""


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------

class NoJsonFound(RoomforgeError):
    """LLM response contained no parseable JSON array."""


class InvalidBox(RoomforgeError):
    """A layout box violates its invariants.

    Carries the offending index and a human-readable reason.
    """

    def __init__(self, index: int, reason: str):
        super().__init__(f"box {index}: {reason}")
        self.index = index
        self.reason = reason


class LayoutRejected(RoomforgeError):
    """LLM layout failed validation twice; carries the violation list."""

    def __init__(self, violations):
        super().__init__(f"layout rejected after retry: {violations}")
        self.violations = list(violations)


class UnknownObject(RoomforgeError):
    """Manipulation op targets an object id not present in the scene."""


class InvalidOp(RoomforgeError):
    """Manipulation op parameters violate their invariants."""


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

class ConfigError(RoomforgeError):
    """Pipeline configuration is invalid."""


class StageError(RoomforgeError):
    """A pipeline stage failed; names the stage and wraps the cause."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
