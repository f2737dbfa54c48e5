"""Provider abstraction over completion and embedding calls.

Three modes back the same interface: live (real endpoint), replay (recorded
transcript lookup), and mock (pure function of the input). The fast/deep tier
split lets cheap models handle per-unit summaries while stronger models do
aggregation and entity extraction; concrete model names are runtime config.
"""

from __future__ import annotations

import time
from abc import ABC, abstractmethod
from typing import Callable, Literal, TypeVar

import numpy as np

from ..errors import ProviderFailure

Tier = Literal["fast", "deep"]

DEFAULT_EMBEDDING_DIM = 256

T = TypeVar("T")


class LlmProvider(ABC):
    mode: str = "abstract"
    dim: int = DEFAULT_EMBEDDING_DIM

    @abstractmethod
    def complete(self, prompt: str, tier: Tier = "fast") -> str:
        """Return completion text for the prompt."""

    @abstractmethod
    def embed(self, text: str) -> np.ndarray:
        """Return a float32 vector of dimension `dim`, unit-norm unless the
        input has no tokens at all (then all zeros)."""


def with_retries(fn: Callable[[], T], attempts: int = 3, backoff: float = 0.0) -> T:
    """Run fn, retrying ProviderFailure up to `attempts` total tries."""
    last: ProviderFailure | None = None
    for i in range(attempts):
        try:
            return fn()
        except ProviderFailure as exc:
            last = exc
            if backoff and i + 1 < attempts:
                time.sleep(backoff * (i + 1))
    assert last is not None
    raise last
