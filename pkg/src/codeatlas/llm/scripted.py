"""Scripted provider: canned completions in order, hashed-BoW embeddings.

The workhorse for agent and service tests; scripts can model well-behaved,
never-finalizing, or permanently malformed providers.
"""

from __future__ import annotations

import threading

import numpy as np

from ..errors import ProviderFailure
from .mock import hashed_bow_embedding
from .provider import DEFAULT_EMBEDDING_DIM, LlmProvider, Tier


class ScriptedProvider(LlmProvider):
    mode = "mock"

    def __init__(self, completions: list[str], on_exhausted: str = "error",
                 dim: int = DEFAULT_EMBEDDING_DIM):
        if on_exhausted not in ("error", "repeat", "cycle"):
            raise ValueError(f"bad on_exhausted policy: {on_exhausted!r}")
        self.completions = list(completions)
        self.on_exhausted = on_exhausted
        self.dim = dim
        self.calls: list[tuple[str, str]] = []  # (tier, prompt)
        self._i = 0
        self._lock = threading.Lock()

    def complete(self, prompt: str, tier: Tier = "fast") -> str:
        with self._lock:
            self.calls.append((tier, prompt))
            if self._i < len(self.completions):
                response = self.completions[self._i]
                self._i += 1
                return response
            if not self.completions:
                raise ProviderFailure("scripted provider has no completions")
            if self.on_exhausted == "repeat":
                return self.completions[-1]
            if self.on_exhausted == "cycle":
                response = self.completions[self._i % len(self.completions)]
                self._i += 1
                return response
            raise ProviderFailure("scripted provider exhausted")

    def embed(self, text: str) -> np.ndarray:
        return hashed_bow_embedding(text, self.dim)
