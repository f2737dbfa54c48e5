"""Provider abstraction: live, replay, and deterministic-mock modes."""

from .live import LiveProvider
from .mock import MockProvider, fnv1a32, hashed_bow_embedding
from .provider import DEFAULT_EMBEDDING_DIM, LlmProvider, Tier, with_retries
from .scripted import ScriptedProvider
from .transcript import (
    EMBED_TIER,
    RecordingProvider,
    ReplayProvider,
    Transcript,
    TranscriptRecord,
    decode_embedding,
    encode_embedding,
    prompt_hash,
)

__all__ = [
    "DEFAULT_EMBEDDING_DIM",
    "EMBED_TIER",
    "LiveProvider",
    "LlmProvider",
    "MockProvider",
    "RecordingProvider",
    "ReplayProvider",
    "ScriptedProvider",
    "Tier",
    "Transcript",
    "TranscriptRecord",
    "decode_embedding",
    "encode_embedding",
    "fnv1a32",
    "hashed_bow_embedding",
    "prompt_hash",
    "with_retries",
]
