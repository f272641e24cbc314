from .contracts import SynthesisRequest, SynthesisResponse, TextureSynthesizer, synthesize
from .llm import (
    LAYOUT_SYSTEM_PROMPT,
    LayoutRequest,
    LlmClient,
    build_layout_prompt,
    parse_layout_response,
)
from .procedural import ProceduralBackend
from .remote import RemoteBackend, RemoteLlmClient
from .toy import ToyDdpmBackend

__all__ = [
    "LAYOUT_SYSTEM_PROMPT",
    "LayoutRequest",
    "LlmClient",
    "ProceduralBackend",
    "RemoteBackend",
    "RemoteLlmClient",
    "SynthesisRequest",
    "SynthesisResponse",
    "TextureSynthesizer",
    "ToyDdpmBackend",
    "build_layout_prompt",
    "parse_layout_response",
    "synthesize",
]
