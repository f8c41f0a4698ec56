"""Immutable multisets with canonical ordering and multiplicity capping."""

from __future__ import annotations

from collections import Counter
from typing import Any, Iterable, Iterator


class Multiset:
    """Unordered collection with multiplicities.

    Equality and hashing are independent of insertion order. `canonical()`
    returns the elements sorted by their serialized form, which makes
    iteration order deterministic even for unorderable element types.
    """

    __slots__ = ("_counts",)

    def __init__(self, items: Iterable[Any] = ()):
        self._counts: Counter = Counter(items)

    @classmethod
    def from_counts(cls, pairs: Iterable[tuple[Any, int]]) -> "Multiset":
        ms = cls()
        for element, count in pairs:
            if count < 0:
                raise ValueError(f"negative multiplicity {count} for {element!r}")
            if count:
                ms._counts[element] += count
        return ms

    def count(self, element: Any) -> int:
        return self._counts.get(element, 0)

    def total(self) -> int:
        return sum(self._counts.values())

    def distinct(self) -> int:
        return len(self._counts)

    def canonical(self) -> tuple[tuple[Any, int], ...]:
        """(element, multiplicity) pairs sorted by the element's repr."""
        return tuple(sorted(self._counts.items(), key=lambda kv: repr(kv[0])))

    def restrict(self, c: int) -> "Multiset":
        """Cap every multiplicity at `c` (c >= 1)."""
        if c < 1:
            raise ValueError(f"multiplicity bound must be >= 1, got {c}")
        return Multiset.from_counts((e, min(m, c)) for e, m in self._counts.items())

    def __iter__(self) -> Iterator[Any]:
        for element, count in self.canonical():
            for _ in range(count):
                yield element

    def __len__(self) -> int:
        return self.total()

    def __contains__(self, element: Any) -> bool:
        return element in self._counts

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        return hash(frozenset(self._counts.items()))

    def __repr__(self) -> str:
        return f"Multiset({list(self)!r})"


def restrict_multiset(a: Multiset, c: int) -> Multiset:
    """Multiset obtained from `a` by capping multiplicities at `c`."""
    return a.restrict(c)


def restricted_equal(a: Multiset, b: Multiset, c: int) -> bool:
    """True when `a` and `b` agree after capping multiplicities at `c`."""
    return a.restrict(c) == b.restrict(c)
