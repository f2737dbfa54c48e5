"""Live provider speaking the common chat-completions/embeddings HTTP shape.

Credentials are resolved from an environment variable at call time and never
stored on the instance, so they cannot leak into snapshots or traces.
"""

from __future__ import annotations

import os

import httpx
import numpy as np

from ..errors import ProviderFailure
from .provider import DEFAULT_EMBEDDING_DIM, LlmProvider, Tier, with_retries


class LiveProvider(LlmProvider):
    mode = "live"

    def __init__(
        self,
        endpoint: str,
        api_key_env: str = "LLM_API_KEY",
        fast_model: str = "fast-default",
        deep_model: str = "deep-default",
        embed_model: str = "embed-default",
        dim: int = DEFAULT_EMBEDDING_DIM,
        timeout: float = 60.0,
        attempts: int = 3,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.api_key_env = api_key_env
        self.fast_model = fast_model
        self.deep_model = deep_model
        self.embed_model = embed_model
        self.dim = dim
        self.timeout = timeout
        self.attempts = attempts

    def _headers(self) -> dict[str, str]:
        key = os.environ.get(self.api_key_env, "")
        headers = {"Content-Type": "application/json"}
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post(self, path: str, payload: dict) -> dict:
        def call() -> dict:
            try:
                response = httpx.post(
                    f"{self.endpoint}{path}", json=payload,
                    headers=self._headers(), timeout=self.timeout,
                )
            except httpx.HTTPError as exc:
                raise ProviderFailure(f"request to {path} failed: {exc}") from exc
            if response.status_code != 200:
                raise ProviderFailure(
                    f"{path} returned {response.status_code}: {response.text[:200]}"
                )
            return response.json()

        return with_retries(call, attempts=self.attempts, backoff=0.5)

    def complete(self, prompt: str, tier: Tier = "fast") -> str:
        model = self.deep_model if tier == "deep" else self.fast_model
        data = self._post("/chat/completions", {
            "model": model,
            "messages": [{"role": "user", "content": prompt}],
        })
        try:
            return data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderFailure(f"unexpected completion payload: {exc}") from exc

    def embed(self, text: str) -> np.ndarray:
        data = self._post("/embeddings", {"model": self.embed_model, "input": text})
        try:
            vector = np.asarray(data["data"][0]["embedding"], dtype=np.float64)
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderFailure(f"unexpected embedding payload: {exc}") from exc
        if vector.shape[0] != self.dim:
            raise ProviderFailure(
                f"embedding dimension {vector.shape[0]} != configured {self.dim}"
            )
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            return np.zeros(self.dim, dtype=np.float32)
        return (vector / norm).astype(np.float32)
