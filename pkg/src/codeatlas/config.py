"""System configuration: TOML file loading and validation.

Relative paths in the file (repo roots, snapshot, transcript) resolve against
the config file's directory. Credentials are referenced by environment
variable name only and never persisted anywhere.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .extract import DEFAULT_MAX_FILE_BYTES, RepoSpec, adapter_keys
from .llm import (
    DEFAULT_EMBEDDING_DIM,
    LiveProvider,
    LlmProvider,
    MockProvider,
    RecordingProvider,
    ReplayProvider,
)

PROVIDER_MODES = ("mock", "replay", "live")


@dataclass
class ProviderConfig:
    mode: str = "mock"
    endpoint: str = ""
    api_key_env: str = "LLM_API_KEY"
    fast_model: str = "fast-default"
    deep_model: str = "deep-default"
    embed_model: str = "embed-default"
    embedding_dim: int = DEFAULT_EMBEDDING_DIM
    transcript: Path | None = None  # replay source
    record: Path | None = None  # record sink


@dataclass
class IndexConfig:
    k: int = 5
    threshold: float = 0.35


@dataclass
class AgentConfig:
    max_steps: int = 8
    observation_tokens: int = 2000


@dataclass
class SystemConfig:
    name: str
    repos: list[RepoSpec]
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    index: IndexConfig = field(default_factory=IndexConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    snapshot_path: Path = Path("graph.clgs")
    promote_methods: bool = False
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES
    parallelism: int = 4

    def validate(self) -> None:
        if not self.name:
            raise ConfigError("system.name must be non-empty")
        if not self.repos:
            raise ConfigError("at least one [[repos]] entry is required")
        names = [r.name for r in self.repos]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate repo names: {names}")
        for repo in self.repos:
            if not repo.name:
                raise ConfigError("repo name must be non-empty")
            if repo.language not in adapter_keys():
                raise ConfigError(
                    f"repo {repo.name!r}: unknown language {repo.language!r} "
                    f"(available: {', '.join(adapter_keys())})"
                )
            if not Path(repo.root).is_dir():
                raise ConfigError(f"repo {repo.name!r}: root is not a directory: {repo.root}")
        if self.provider.mode not in PROVIDER_MODES:
            raise ConfigError(
                f"provider.mode must be one of {', '.join(PROVIDER_MODES)}, "
                f"got {self.provider.mode!r}"
            )
        if self.provider.mode == "live" and not self.provider.endpoint:
            raise ConfigError("provider.endpoint required for live mode")
        if self.provider.mode == "replay" and self.provider.transcript is None:
            raise ConfigError("provider.transcript required for replay mode")
        if self.provider.embedding_dim < 1:
            raise ConfigError("provider.embedding_dim must be >= 1")
        if self.index.k < 1:
            raise ConfigError("index.k must be >= 1")
        if self.agent.max_steps < 1:
            raise ConfigError("agent.max_steps must be >= 1")


def _resolve(base: Path, value: str) -> Path:
    path = Path(value)
    return path if path.is_absolute() else (base / path)


def load_config(path: str | Path) -> SystemConfig:
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc
    return config_from_dict(raw, base_dir=path.parent)


def config_from_dict(raw: dict, base_dir: Path) -> SystemConfig:
    """Build a SystemConfig from either the TOML shape ([system] name, [snapshot]
    path) or the flat HTTP-API shape (name, snapshot_path at top level)."""
    try:
        name = raw.get("system", {}).get("name") or raw.get("name", "")
        repos = [
            RepoSpec(
                name=entry["name"],
                root=_resolve(base_dir, entry["root"]),
                language=entry.get("language", "java"),
                include=list(entry.get("include", [])),
                exclude=list(entry.get("exclude", [])),
            )
            for entry in raw.get("repos", [])
        ]
        provider_raw = raw.get("provider", {})
        provider = ProviderConfig(
            mode=provider_raw.get("mode", "mock"),
            endpoint=provider_raw.get("endpoint", ""),
            api_key_env=provider_raw.get("api_key_env", "LLM_API_KEY"),
            fast_model=provider_raw.get("fast_model", "fast-default"),
            deep_model=provider_raw.get("deep_model", "deep-default"),
            embed_model=provider_raw.get("embed_model", "embed-default"),
            embedding_dim=int(provider_raw.get("embedding_dim", DEFAULT_EMBEDDING_DIM)),
            transcript=(
                _resolve(base_dir, provider_raw["transcript"])
                if provider_raw.get("transcript") is not None else None
            ),
            record=(
                _resolve(base_dir, provider_raw["record"])
                if provider_raw.get("record") is not None else None
            ),
        )
        index_raw = raw.get("index", {})
        index = IndexConfig(
            k=int(index_raw.get("k", 5)),
            threshold=float(index_raw.get("threshold", 0.35)),
        )
        agent_raw = raw.get("agent", {})
        agent = AgentConfig(
            max_steps=int(agent_raw.get("max_steps", 8)),
            observation_tokens=int(agent_raw.get("observation_tokens", 2000)),
        )
        snapshot_value = raw.get("snapshot", {}).get("path") or raw.get(
            "snapshot_path", "graph.clgs"
        )
        extract_raw = raw.get("extract", {})
        config = SystemConfig(
            name=name,
            repos=repos,
            provider=provider,
            index=index,
            agent=agent,
            snapshot_path=_resolve(base_dir, snapshot_value),
            promote_methods=bool(extract_raw.get("promote_methods",
                                                 raw.get("promote_methods", False))),
            max_file_bytes=int(extract_raw.get("max_file_bytes", DEFAULT_MAX_FILE_BYTES)),
            parallelism=int(extract_raw.get("parallelism", 4)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"config structure invalid: {exc}") from exc
    config.validate()
    return config


def make_provider(config: ProviderConfig) -> LlmProvider:
    """Instantiate the configured provider, wrapped for recording if asked."""
    if config.mode == "mock":
        provider: LlmProvider = MockProvider(dim=config.embedding_dim)
    elif config.mode == "replay":
        assert config.transcript is not None
        provider = ReplayProvider.from_file(config.transcript, dim=config.embedding_dim)
    else:
        provider = LiveProvider(
            endpoint=config.endpoint,
            api_key_env=config.api_key_env,
            fast_model=config.fast_model,
            deep_model=config.deep_model,
            embed_model=config.embed_model,
            dim=config.embedding_dim,
        )
    if config.record is not None:
        provider = RecordingProvider(provider, config.record)
    return provider
