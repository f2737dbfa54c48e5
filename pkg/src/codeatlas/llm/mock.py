"""Deterministic mock provider.

complete() keys off the prompt-template markers and answers with fixed
templates built from names embedded in the prompt, so two builds over
identical inputs produce identical graphs. embed() is a hashed bag-of-words:
tokenize on non-alphanumerics, lowercase, FNV-1a each token into one of `dim`
buckets, accumulate counts, L2-normalize. Scalar multiples of a text ("order
order" vs "order") therefore embed identically, and shared vocabulary yields
proportionally higher cosine.
"""

from __future__ import annotations

import hashlib
import json
import re

import numpy as np

from .provider import DEFAULT_EMBEDDING_DIM, LlmProvider, Tier

_TOKEN_SPLIT = re.compile(r"[^0-9A-Za-z]+")
_CAMEL_RE = re.compile(r"[A-Z][a-z0-9]+|[A-Z]+(?![a-z])|[a-z0-9]+")

# markers come from the first line of each prompt template
_CODE_MARKER = "Task: summarize one code unit"
_PROJECT_MARKER = "Task: describe a project"
_SYSTEM_MARKER = "Task: give a unified, high-level overview"
_ENTITY_MARKER = "Task: extract domain entities"
_AGENT_MARKER = "ACTION <tool> <json-args>"

_SUFFIX_VERBS = {
    "Controller": "CREATE",
    "Processor": "PROCESS",
    "Manager": "MANAGE",
    "Service": "HANDLE",
    "Handler": "HANDLE",
    "Producer": "PRODUCE",
    "Consumer": "CONSUME",
    "Repository": "STORE",
    "Worker": "EXECUTE",
    "Client": "REQUEST",
    "Factory": "BUILD",
}
_REPRESENTS_SUFFIXES = {"Model", "Dto", "DTO", "Entity", "Record", "Struct", "Schema"}


def fnv1a32(data: bytes) -> int:
    value = 2166136261
    for byte in data:
        value ^= byte
        value = (value * 16777619) & 0xFFFFFFFF
    return value


def hashed_bow_embedding(text: str, dim: int) -> np.ndarray:
    counts = np.zeros(dim, dtype=np.float64)
    for token in _TOKEN_SPLIT.split(text.lower()):
        if token:
            counts[fnv1a32(token.encode("utf-8")) % dim] += 1.0
    norm = float(np.linalg.norm(counts))
    if norm == 0.0:
        return np.zeros(dim, dtype=np.float32)
    return (counts / norm).astype(np.float32)


def _field(prompt: str, label: str) -> str:
    match = re.search(rf"^{re.escape(label)}: (.*)$", prompt, re.MULTILINE)
    return match.group(1).strip() if match else ""


def _list_items(prompt: str) -> list[str]:
    return re.findall(r"^- (.*)$", prompt, re.MULTILINE)


class MockProvider(LlmProvider):
    mode = "mock"

    def __init__(self, dim: int = DEFAULT_EMBEDDING_DIM):
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        return hashed_bow_embedding(text, self.dim)

    def complete(self, prompt: str, tier: Tier = "fast") -> str:
        if prompt.startswith(_CODE_MARKER):
            return self._code_summary(prompt)
        if prompt.startswith(_PROJECT_MARKER):
            return self._project_summary(prompt)
        if prompt.startswith(_SYSTEM_MARKER):
            return self._system_summary(prompt)
        if prompt.startswith(_ENTITY_MARKER):
            return self._entity_extraction(prompt)
        if _AGENT_MARKER in prompt:
            return self._agent_step(prompt)
        digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:12]
        return f"Mock completion {digest}."

    # -- per-template behaviors --------------------------------------------

    @staticmethod
    def _code_summary(prompt: str) -> str:
        name = _field(prompt, "Unit")
        project = _field(prompt, "Project")
        language = _field(prompt, "Language")
        file = _field(prompt, "File")
        spaced = " ".join(w.lower() for w in _CAMEL_RE.findall(name))
        return (
            f"Summary of {name}: the {spaced} unit belongs to the {project} project "
            f"({language}, {file}). It implements part of the {project} behavior."
        )

    @staticmethod
    def _project_summary(prompt: str) -> str:
        name = _field(prompt, "Project")
        children = [item.split(" | ", 1)[0].strip() for item in _list_items(prompt)]
        return (
            f"Project {name}: aggregates {len(children)} code units: "
            f"{', '.join(children)}. It provides the {name} responsibilities of the system."
        )

    @staticmethod
    def _system_summary(prompt: str) -> str:
        name = _field(prompt, "System")
        children = [item.split(" | ", 1)[0].strip() for item in _list_items(prompt)]
        return (
            f"System {name}: composed of {len(children)} projects: "
            f"{', '.join(children)}. It provides the overall {name} functionality."
        )

    @staticmethod
    def _entity_extraction(prompt: str) -> str:
        entities: dict[str, dict] = {}
        for item in _list_items(prompt):
            parts = [p.strip() for p in item.split("|")]
            if len(parts) < 2:
                continue
            uid, unit_name = parts[0], parts[1]
            words = _CAMEL_RE.findall(unit_name)
            if len(words) < 2:
                continue
            *head, suffix = words
            if suffix not in _REPRESENTS_SUFFIXES and suffix not in _SUFFIX_VERBS:
                continue
            entity_name = " ".join(head)
            record = entities.setdefault(entity_name, {
                "name": entity_name,
                "description": (
                    f"Domain entity {entity_name}. The {entity_name} entity is "
                    f"shared across the system."
                ),
                "operations": [],
                "represented_by": [],
            })
            if suffix in _REPRESENTS_SUFFIXES:
                record["represented_by"].append(uid)
            else:
                record["operations"].append({"code": uid, "verb": _SUFFIX_VERBS[suffix]})
        for record in entities.values():
            record["operations"].sort(key=lambda op: (op["code"], op["verb"]))
            record["represented_by"].sort()
        payload = {"entities": [entities[k] for k in sorted(entities)]}
        return json.dumps(payload, sort_keys=True)

    @staticmethod
    def _agent_step(prompt: str) -> str:
        question = _field(prompt, "Question")
        if "Observation:" in prompt:
            tail = prompt.rsplit("Observation:\n", 1)[1]
            lines = []
            for line in tail.splitlines():
                if not line.strip():
                    break
                lines.append(line)
            summary = " / ".join(lines[:3])
            return (
                f"FINAL: Findings for {question!r} based on the retrieved subgraph: "
                f"{summary}"
            )
        # keyword query: lowercase tokens, naive singular, generous threshold
        tokens = [t for t in _TOKEN_SPLIT.split(question.lower()) if t]
        tokens = [t[:-1] if len(t) > 2 and t.endswith("s") and not t.endswith("ss") else t
                  for t in tokens]
        args = json.dumps({"query": " ".join(tokens), "threshold": 0.15}, sort_keys=True)
        return (
            "Thought: the question concerns domain concepts; inspecting entities first.\n"
            f"ACTION entities {args}"
        )
