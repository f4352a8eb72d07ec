"""Exact rational sequences: Bernoulli numbers, Euler endpoint values,
factorials, and a line-oriented Bernoulli cache.

Bernoulli numbers use the defining recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0
with memoization (convention B_1 = -1/2).  Euler polynomial endpoint values
come from E_{2m+1}(1) = 2 (2^{2m+2} - 1) B_{2m+2} / (2m+2); the general
polynomial constructor deliberately lives only in the test oracle.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .numkernel import ZetaforgeError

__all__ = [
    "CacheFormatError",
    "CacheCorruptionError",
    "BernoulliTable",
    "EulerEndpointTable",
    "bernoulli",
    "euler_endpoint",
    "factorial",
    "build_table",
    "euler_endpoint_table",
    "cache_store",
    "cache_load",
]

_CACHE_HEADER = "BERNOULLI-CACHE v1"


class CacheFormatError(ZetaforgeError):
    """Cache file is malformed or has the wrong version."""


class CacheCorruptionError(ZetaforgeError):
    """Cache file parses but fails the recurrence re-verification."""


@dataclass(frozen=True)
class BernoulliTable:
    """Even-index Bernoulli numbers 2..max_index."""

    entries: dict[int, Fraction]
    max_index: int


@dataclass(frozen=True)
class EulerEndpointTable:
    """Map from odd degree 2m+1 to E_{2m+1}(1)."""

    entries: dict[int, Fraction] = field(default_factory=dict)


# Grow-only memo: reads are safe anywhere, extension is serialized.
_memo: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
_memo_lock = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """Exact B_n with B_1 = -1/2; zero for odd n > 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n < len(_memo):
        return _memo[n]
    with _memo_lock:
        while len(_memo) <= n:
            k = len(_memo)
            if k % 2 == 1:
                _memo.append(Fraction(0))
                continue
            acc = Fraction(0)
            for j in range(k):
                if _memo[j]:
                    acc += math.comb(k + 1, j) * _memo[j]
            _memo.append(-acc / (k + 1))
    return _memo[n]


def euler_endpoint(m: int) -> Fraction:
    """Exact E_{2m+1}(1)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    n = 2 * m + 2
    return 2 * Fraction(2 ** n - 1, n) * bernoulli(n)


def factorial(k: int) -> int:
    if k < 0:
        raise ValueError("k must be >= 0")
    return math.factorial(k)


def build_table(up_to: int) -> BernoulliTable:
    """Bernoulli table for even indices 2..up_to (up_to even, >= 2)."""
    if up_to < 2 or up_to % 2 != 0:
        raise ValueError("up_to must be an even integer >= 2")
    bernoulli(up_to)
    return BernoulliTable({i: _memo[i] for i in range(2, up_to + 1, 2)}, up_to)


def cache_store(table: BernoulliTable, path: str | Path) -> None:
    lines = [_CACHE_HEADER]
    for idx in sorted(table.entries):
        b = table.entries[idx]
        lines.append(f"{idx} {b.numerator} {b.denominator}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def cache_load(path: str | Path) -> BernoulliTable:
    """Load and re-verify a cache file.

    The first 10 stored indices are recomputed from the recurrence; any
    mismatch is corruption, not a format problem.
    """
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise CacheFormatError(f"cache is not ascii text: {exc}") from None
    lines = text.split("\n")
    if not lines or lines[0] != _CACHE_HEADER:
        raise CacheFormatError(f"bad cache header (want {_CACHE_HEADER!r})")
    if lines[-1] != "":
        raise CacheFormatError("cache must be newline-terminated")
    entries: dict[int, Fraction] = {}
    prev = 0
    for ln in lines[1:-1]:
        parts = ln.split(" ")
        if len(parts) != 3:
            raise CacheFormatError(f"bad cache line {ln!r}")
        try:
            idx, num, den = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise CacheFormatError(f"non-integer field in line {ln!r}") from None
        if idx % 2 != 0 or idx <= prev:
            raise CacheFormatError("indices must be even and strictly ascending")
        if den <= 0:
            raise CacheFormatError("denominator must be positive")
        entries[idx] = Fraction(num, den)
        prev = idx
    if not entries:
        raise CacheFormatError("cache holds no entries")
    for idx in sorted(entries)[:10]:
        if entries[idx] != bernoulli(idx):
            raise CacheCorruptionError(f"entry for index {idx} fails the recurrence check")
    return BernoulliTable(entries, max(entries))


def euler_endpoint_table(up_to_m: int) -> EulerEndpointTable:
    """Endpoint values E_1(1) .. E_{2*up_to_m+1}(1)."""
    return EulerEndpointTable({2 * m + 1: euler_endpoint(m) for m in range(up_to_m + 1)})
