"""Asynchronous build jobs with monotonic phase tracking."""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

PHASE_ORDER = {
    "scanning": 0,
    "structural": 1,
    "describing": 2,
    "entities": 3,
    "embedding": 4,
    "done": 5,
    "failed": 5,
}


@dataclass
class BuildJob:
    job_id: str
    system_id: str
    phase: str = "scanning"
    counters: dict = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    error: str | None = None

    def advance(self, phase: str, counters: dict | None = None) -> None:
        if phase not in PHASE_ORDER:
            raise ValueError(f"unknown phase {phase!r}")
        if PHASE_ORDER[phase] < PHASE_ORDER[self.phase]:
            raise ValueError(f"phase cannot regress: {self.phase} -> {phase}")
        self.phase = phase
        if counters:
            self.counters.update(counters)

    def fail(self, message: str) -> None:
        self.phase = "failed"
        self.error = message

    @property
    def finished(self) -> bool:
        return self.phase in ("done", "failed")

    def to_dict(self) -> dict:
        return {
            "jobId": self.job_id,
            "systemId": self.system_id,
            "phase": self.phase,
            "counters": dict(self.counters),
            "diagnostics": list(self.diagnostics),
            "error": self.error,
        }


class JobRegistry:
    def __init__(self) -> None:
        self._jobs: dict[str, BuildJob] = {}
        self._lock = threading.Lock()

    def create(self, system_id: str) -> BuildJob:
        job = BuildJob(job_id=uuid.uuid4().hex, system_id=system_id)
        with self._lock:
            self._jobs[job.job_id] = job
        return job

    def get(self, job_id: str) -> BuildJob | None:
        with self._lock:
            return self._jobs.get(job_id)
