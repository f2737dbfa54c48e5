"""Language adapter registry."""

from __future__ import annotations

from ...errors import NoAdapter
from .base import LanguageAdapter
from .facts import FactsAdapter
from .javalike import JavaLikeAdapter
from .pythonlang import PythonAdapter

_REGISTRY = {
    JavaLikeAdapter.key: JavaLikeAdapter,
    PythonAdapter.key: PythonAdapter,
    FactsAdapter.key: FactsAdapter,
}


def adapter_keys() -> list[str]:
    return sorted(_REGISTRY)


def get_adapter(key: str, promote_methods: bool = False) -> LanguageAdapter:
    try:
        factory = _REGISTRY[key]
    except KeyError:
        raise NoAdapter(f"no language adapter {key!r}; available: {', '.join(adapter_keys())}") from None
    return factory(promote_methods=promote_methods)


__all__ = ["LanguageAdapter", "FactsAdapter", "JavaLikeAdapter", "PythonAdapter",
           "adapter_keys", "get_adapter"]
