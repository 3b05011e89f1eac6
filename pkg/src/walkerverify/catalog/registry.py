"""
Name lookup over the built-in entries and their self-test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..config import DEFAULT_SEED
from ..errors import CatalogError
from ..geometry import max_residual
from ..utils.logging import format_point, get_logger
from ..walker import assemble
from .entries import CatalogEntry, builtin_entries

logger = get_logger(__name__)

SELF_TEST_TOL = 1e-7


@dataclass
class SelfTestResult:
    """Einstein residual of one entry against what the entry declares."""

    name: str
    residual: float
    einstein: bool
    """Declared expectation"""

    tol: float = SELF_TEST_TOL

    @property
    def passed(self) -> bool:
        if self.einstein:
            return self.residual < self.tol
        return self.residual >= self.tol


class CatalogRegistry:
    """Read-only mapping of entry names to catalog entries."""

    def __init__(self, entries: Optional[list[CatalogEntry]] = None):
        self._entries: dict[str, CatalogEntry] = {}
        for entry in entries if entries is not None else builtin_entries():
            if entry.name in self._entries:
                raise CatalogError(f"Duplicate catalog entry '{entry.name}'", error_code="duplicate")
            self._entries[entry.name] = entry
        for entry in self._entries.values():
            if entry.original is not None and entry.original not in self._entries:
                raise CatalogError(
                    f"Entry '{entry.name}' refers to unknown original '{entry.original}'",
                    error_code="unknown-original",
                )

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, name: str) -> CatalogEntry:
        try:
            return self._entries[name]
        except KeyError:
            raise CatalogError(
                f"Unknown catalog entry '{name}'",
                error_code="unknown-entry",
                details={"available": self.list_names()},
            ) from None

    def list_names(self) -> list[str]:
        return sorted(self._entries)

    def entries(self) -> list[CatalogEntry]:
        return [self._entries[name] for name in self.list_names()]

    def pairs(self) -> list[tuple[CatalogEntry, CatalogEntry]]:
        """(original, transformed) pairs."""
        return [(self._entries[e.original], e) for e in self.entries() if e.original is not None]


def self_test(
    entry: CatalogEntry,
    n: int = 200,
    seed: int = DEFAULT_SEED,
    lam: Optional[float] = None,
) -> SelfTestResult:
    """
    Sample the Einstein residual of an entry on its box.

    Negative controls pass when the residual stays above the tolerance.
    """
    value = entry.lam if lam is None else lam
    worst = max_residual(assemble(entry.metric), value, entry.box, n, seed, entry.params(value))
    result = SelfTestResult(entry.name, worst.value, entry.einstein)
    if not result.passed:
        logger.warning(
            "Catalog entry '%s' failed its self-test (residual %.3e at %s)",
            entry.name,
            worst.value,
            format_point(worst.point.values),
        )
    return result


_catalog: Optional[CatalogRegistry] = None


def get_catalog() -> CatalogRegistry:
    """Shared registry, built on first use."""
    global _catalog
    if _catalog is None:
        _catalog = CatalogRegistry()
        logger.debug("Catalog initialised with %d entries", len(_catalog))
    return _catalog


def get(name: str) -> CatalogEntry:
    return get_catalog().get(name)


def list_names() -> list[str]:
    return get_catalog().list_names()


__all__ = [
    "SELF_TEST_TOL",
    "SelfTestResult",
    "CatalogRegistry",
    "self_test",
    "get_catalog",
    "get",
    "list_names",
]
