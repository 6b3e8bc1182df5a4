"""
Memoization layer for expensive symbolic results.

Mode profiles, kernel-pair integrals and operator brackets are pure
functions of hashable keys, so they are stored behind a small cache
interface. The LRU backend wraps cachetools; a no-op backend turns
caching off without changing any result.
"""

import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Optional

from cavity_eh.models import CacheConfig

logger = logging.getLogger(__name__)

_MISSING = object()


@dataclass
class CacheStats:
    """
    Cache statistics.

    Attributes:
        hits: Number of cache hits
        misses: Number of cache misses
        size: Current number of cached entries
        max_size: Maximum cache capacity
    """

    hits: int = 0
    misses: int = 0
    size: int = 0
    max_size: int = 0

    @property
    def hit_rate(self) -> float:
        """Calculate cache hit rate as percentage."""
        total = self.hits + self.misses
        return (self.hits / total * 100) if total > 0 else 0.0


class CacheBackend(ABC):
    """
    Abstract base class for cache implementations.

    Keys are arbitrary hashable tuples; ``None`` is never stored so that
    ``get`` can signal a miss.
    """

    @abstractmethod
    def get(self, key: Hashable) -> Optional[Any]:
        """
        Get value from cache.

        Args:
            key: Cache key

        Returns:
            Cached value if found, None otherwise
        """
        raise NotImplementedError

    @abstractmethod
    def set(self, key: Hashable, value: Any) -> None:
        """
        Store a value.

        Args:
            key: Cache key
            value: Value to cache
        """
        raise NotImplementedError

    @abstractmethod
    def delete(self, key: Hashable) -> None:
        """Delete key from cache."""
        raise NotImplementedError

    @abstractmethod
    def clear(self) -> None:
        """Clear all cache entries and reset statistics."""
        raise NotImplementedError

    @abstractmethod
    def get_stats(self) -> CacheStats:
        """Return current statistics."""
        raise NotImplementedError

    @abstractmethod
    def is_enabled(self) -> bool:
        """Check if cache is enabled."""
        raise NotImplementedError

    def get_or_compute(self, key: Hashable, compute: Callable[[], Any]) -> Any:
        """
        Return the cached value for ``key`` or compute and store it.

        Examples:
            >>> cache = NoOpCacheBackend()
            >>> cache.get_or_compute(("k",), lambda: 42)
            42
        """
        value = self.get(key)
        if value is not None:
            return value
        logger.debug("cache miss: %s", key[0] if isinstance(key, tuple) and key else key)
        value = compute()
        if value is not None:
            self.set(key, value)
        return value


class NoOpCacheBackend(CacheBackend):
    """
    No-operation cache backend (caching disabled).

    Examples:
        >>> cache = NoOpCacheBackend()
        >>> cache.set("key", 1)
        >>> cache.get("key") is None
        True
    """

    def get(self, key: Hashable) -> Optional[Any]:
        """Always returns None (cache disabled)."""
        return None

    def set(self, key: Hashable, value: Any) -> None:
        """No-op (cache disabled)."""
        pass

    def delete(self, key: Hashable) -> None:
        """No-op (cache disabled)."""
        pass

    def clear(self) -> None:
        """No-op (cache disabled)."""
        pass

    def get_stats(self) -> CacheStats:
        """Returns empty statistics."""
        return CacheStats()

    def is_enabled(self) -> bool:
        """Always returns False."""
        return False


class LRUCacheBackend(CacheBackend):
    """
    LRU (Least Recently Used) cache implementation using cachetools.

    Entries never expire; the least recently used entry is evicted when
    ``max_size`` is reached. Every access holds an RLock.

    Examples:
        >>> cache = LRUCacheBackend(CacheConfig(max_size=2))
        >>> cache.set(("a",), 1)
        >>> cache.get(("a",))
        1
    """

    def __init__(self, config: CacheConfig):
        """
        Initialize LRU cache backend.

        Args:
            config: Cache configuration with max_size
        """
        from cachetools import LRUCache

        self.config = config
        self._enabled = config.enabled and config.max_size > 0

        if self._enabled:
            self.cache = LRUCache(maxsize=config.max_size)
        else:
            self.cache = None

        self._hits = 0
        self._misses = 0
        self._lock = threading.RLock()

    def get(self, key: Hashable) -> Optional[Any]:
        if not self._enabled or self.cache is None:
            return None

        with self._lock:
            value = self.cache.get(key, _MISSING)
            if value is _MISSING:
                self._misses += 1
                return None
            self._hits += 1
            return value

    def set(self, key: Hashable, value: Any) -> None:
        if self._enabled and self.cache is not None:
            with self._lock:
                self.cache[key] = value

    def delete(self, key: Hashable) -> None:
        if self._enabled and self.cache is not None:
            with self._lock:
                self.cache.pop(key, None)

    def clear(self) -> None:
        """Clear all cache entries and reset statistics."""
        with self._lock:
            if self._enabled and self.cache is not None:
                self.cache.clear()
            self._hits = 0
            self._misses = 0

    def get_stats(self) -> CacheStats:
        max_size = self.config.max_size if self._enabled else 0
        with self._lock:
            size = len(self.cache) if self.cache is not None else 0
            return CacheStats(
                hits=self._hits, misses=self._misses, size=size, max_size=max_size
            )

    def is_enabled(self) -> bool:
        return self._enabled


class CacheFactory:
    """
    Factory for creating cache backends.

    Examples:
        >>> cache = CacheFactory.create_cache(CacheConfig(enabled=False))
        >>> isinstance(cache, NoOpCacheBackend)
        True
    """

    @staticmethod
    def create_cache(config: CacheConfig) -> CacheBackend:
        """
        Create appropriate cache backend based on configuration.

        Args:
            config: Cache configuration

        Returns:
            Cache backend instance (NoOp if disabled, LRU if enabled)

        Raises:
            ValueError: If backend type is not supported
        """
        if not config.enabled or config.max_size == 0:
            return NoOpCacheBackend()

        backend = config.backend.lower()

        if backend == "lru":
            return LRUCacheBackend(config)
        raise ValueError(
            f"Unsupported cache backend: {backend}. Supported backends: 'lru'"
        )


_global_cache: Optional[CacheBackend] = None
_global_lock = threading.Lock()


def get_cache() -> CacheBackend:
    """
    Get the process-wide computation cache.

    Created lazily with the default CacheConfig.
    """
    global _global_cache
    with _global_lock:
        if _global_cache is None:
            _global_cache = CacheFactory.create_cache(CacheConfig())
        return _global_cache


def configure_cache(config: CacheConfig) -> CacheBackend:
    """Replace the process-wide cache with one built from ``config``."""
    global _global_cache
    with _global_lock:
        _global_cache = CacheFactory.create_cache(config)
        return _global_cache
