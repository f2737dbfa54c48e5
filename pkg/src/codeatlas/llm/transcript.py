"""Transcript recording and exact-replay providers.

Transcript files are line-delimited JSON records {hash, tier, prompt,
response}; embeddings are recorded under the pseudo-tier "embed" with the
vector base64-encoded (little-endian float32) so replays are bit-exact.
Lookups key on (prompt hash, tier, occurrence index): identical prompts are
replayed in the order they were recorded.
"""

from __future__ import annotations

import base64
import hashlib
import json
import threading
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import IoFailure, ReplayMiss
from .provider import LlmProvider, Tier

EMBED_TIER = "embed"


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


@dataclass
class TranscriptRecord:
    hash: str
    tier: str
    prompt: str
    response: str

    def to_json(self) -> str:
        return json.dumps(
            {"hash": self.hash, "tier": self.tier, "prompt": self.prompt,
             "response": self.response},
            sort_keys=True,
        )


class Transcript:
    """Append-only in-memory transcript with line-delimited JSON persistence."""

    def __init__(self) -> None:
        self.records: list[TranscriptRecord] = []
        self._lock = threading.Lock()

    def append(self, tier: str, prompt: str, response: str) -> TranscriptRecord:
        record = TranscriptRecord(hash=prompt_hash(prompt), tier=tier,
                                  prompt=prompt, response=response)
        with self._lock:
            self.records.append(record)
        return record

    def save(self, path: str | Path) -> None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                for record in self.records:
                    fh.write(record.to_json() + "\n")
        except OSError as exc:
            raise IoFailure(f"cannot write transcript {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "Transcript":
        transcript = cls()
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot read transcript {path}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                record = TranscriptRecord(hash=raw["hash"], tier=raw["tier"],
                                          prompt=raw["prompt"], response=raw["response"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise IoFailure(f"transcript {path} line {lineno} malformed: {exc}") from exc
            transcript.records.append(record)
        return transcript


def encode_embedding(vector: np.ndarray) -> str:
    return base64.b64encode(vector.astype("<f4").tobytes()).decode("ascii")


def decode_embedding(text: str) -> np.ndarray:
    return np.frombuffer(base64.b64decode(text), dtype="<f4").copy()


class RecordingProvider(LlmProvider):
    """Wraps another provider, mirroring every call into a transcript."""

    def __init__(self, inner: LlmProvider, path: str | Path | None = None):
        self.inner = inner
        self.mode = inner.mode
        self.dim = inner.dim
        self.transcript = Transcript()
        self._path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        if self._path is not None:
            self._path.write_text("", encoding="utf-8")

    def _write(self, record: TranscriptRecord) -> None:
        if self._path is None:
            return
        with self._lock, open(self._path, "a", encoding="utf-8") as fh:
            fh.write(record.to_json() + "\n")

    def complete(self, prompt: str, tier: Tier = "fast") -> str:
        response = self.inner.complete(prompt, tier)
        self._write(self.transcript.append(tier, prompt, response))
        return response

    def embed(self, text: str) -> np.ndarray:
        vector = self.inner.embed(text)
        self._write(self.transcript.append(EMBED_TIER, text, encode_embedding(vector)))
        return vector


class ReplayProvider(LlmProvider):
    """Serves recorded responses byte-exactly; unknown prompts fail."""

    mode = "replay"

    def __init__(self, transcript: Transcript, dim: int | None = None):
        self._queues: dict[tuple[str, str], deque[str]] = {}
        for record in transcript.records:
            self._queues.setdefault((record.hash, record.tier), deque()).append(record.response)
        self.dim = dim if dim is not None else self._infer_dim(transcript)
        self._lock = threading.Lock()

    @staticmethod
    def _infer_dim(transcript: Transcript) -> int:
        for record in transcript.records:
            if record.tier == EMBED_TIER:
                return int(decode_embedding(record.response).shape[0])
        from .provider import DEFAULT_EMBEDDING_DIM

        return DEFAULT_EMBEDDING_DIM

    @classmethod
    def from_file(cls, path: str | Path, dim: int | None = None) -> "ReplayProvider":
        return cls(Transcript.load(path), dim=dim)

    def _pop(self, tier: str, prompt: str) -> str:
        key = (prompt_hash(prompt), tier)
        with self._lock:
            queue = self._queues.get(key)
            if not queue:
                raise ReplayMiss(
                    f"no recorded {tier} response for prompt starting "
                    f"{prompt.splitlines()[0][:80]!r}"
                )
            return queue.popleft()

    def complete(self, prompt: str, tier: Tier = "fast") -> str:
        return self._pop(tier, prompt)

    def embed(self, text: str) -> np.ndarray:
        return decode_embedding(self._pop(EMBED_TIER, text))
