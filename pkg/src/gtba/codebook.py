"""Angular search space: N equal-width intervals covering [0, 2*pi).

A scanning beam is a set of interval indices; beams used by the search
strategies are built as prefixes of the remaining pool so that they stay as
contiguous as the pool allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

TWO_PI = 2.0 * math.pi

__all__ = [
    "TWO_PI",
    "AngularCodebook",
    "IntervalSet",
    "build_codebook",
    "interval_of",
    "take_prefix",
]


@dataclass(frozen=True)
class AngularCodebook:
    """N disjoint half-open intervals [i*w, (i+1)*w) of width w = 2*pi/N."""

    n_intervals: int
    beamwidth: float

    def __post_init__(self) -> None:
        if self.n_intervals < 1:
            raise ValueError(f"n_intervals must be >= 1, got {self.n_intervals}")
        if not math.isclose(self.beamwidth * self.n_intervals, TWO_PI, rel_tol=1e-12):
            raise ValueError("beamwidth * n_intervals must equal 2*pi")

    def interval_bounds(self, index: int) -> tuple[float, float]:
        """Half-open angular range covered by one interval."""
        if not 0 <= index < self.n_intervals:
            raise IndexError(f"interval index {index} out of range [0, {self.n_intervals})")
        return index * self.beamwidth, (index + 1) * self.beamwidth


def build_codebook(n_intervals: int) -> AngularCodebook:
    """Codebook of `n_intervals` equal-width intervals covering the circle."""
    if n_intervals < 1:
        raise ValueError(f"n_intervals must be >= 1, got {n_intervals}")
    n = int(n_intervals)
    return AngularCodebook(n_intervals=n, beamwidth=TWO_PI / n)


def interval_of(codebook: AngularCodebook, angle: float) -> int:
    """Index of the interval containing `angle`.

    Boundary angles belong to the upper interval (half-open convention);
    an angle numerically equal to 2*pi maps to the last interval.
    """
    if angle < 0.0 or angle >= TWO_PI:
        if abs(angle - TWO_PI) <= 1e-12:
            return codebook.n_intervals - 1
        raise ValueError(f"angle must lie in [0, 2*pi), got {angle}")
    index = int(angle / codebook.beamwidth)
    return min(index, codebook.n_intervals - 1)


class IntervalSet:
    """Immutable ordered set of interval indices."""

    __slots__ = ("_indices", "_members")

    def __init__(self, indices: Iterable[int] = ()) -> None:
        members = frozenset(int(i) for i in indices)
        if any(i < 0 for i in members):
            raise ValueError("interval indices must be non-negative")
        self._members = members
        self._indices = tuple(sorted(members))

    @classmethod
    def _from_sorted(cls, indices: tuple[int, ...]) -> "IntervalSet":
        # fast path for internal callers that already hold sorted unique indices
        obj = cls.__new__(cls)
        obj._indices = indices
        obj._members = frozenset(indices)
        return obj

    @classmethod
    def full(cls, n_intervals: int) -> "IntervalSet":
        return cls._from_sorted(tuple(range(n_intervals)))

    @property
    def indices(self) -> tuple[int, ...]:
        return self._indices

    @property
    def members(self) -> frozenset[int]:
        return self._members

    def __len__(self) -> int:
        return len(self._indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self._indices)

    def __contains__(self, index: int) -> bool:
        return index in self._members

    def __bool__(self) -> bool:
        return bool(self._indices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._indices == other._indices

    def __hash__(self) -> int:
        return hash(self._indices)

    def __repr__(self) -> str:
        return f"IntervalSet({list(self._indices)!r})"

    def first(self) -> int:
        if not self._indices:
            raise IndexError("empty interval set")
        return self._indices[0]

    def isdisjoint(self, other: "IntervalSet") -> bool:
        return self._members.isdisjoint(other._members)

    def union(self, *others: "IntervalSet") -> "IntervalSet":
        merged = self._members.union(*(o._members for o in others))
        return IntervalSet._from_sorted(tuple(sorted(merged)))

    def difference(self, *others: "IntervalSet") -> "IntervalSet":
        if not others:
            return self
        removed = frozenset().union(*(o._members for o in others))
        if not removed:
            return self
        return IntervalSet._from_sorted(tuple(i for i in self._indices if i not in removed))

    def without(self, index: int) -> "IntervalSet":
        if index not in self._members:
            return self
        return IntervalSet._from_sorted(tuple(i for i in self._indices if i != index))

    def is_contiguous(self, n_intervals: int) -> bool:
        """Whether the set forms one contiguous arc modulo wrap-around."""
        if self._indices and self._indices[-1] >= n_intervals:
            raise ValueError("set contains indices outside the codebook")
        k = len(self._indices)
        if k <= 1:
            return True
        breaks = 0
        successors = self._indices[1:] + (self._indices[0] + n_intervals,)
        for cur, nxt in zip(self._indices, successors):
            if nxt - cur != 1:
                breaks += 1
        return breaks <= 1


def take_prefix(pool: IntervalSet, k: int) -> IntervalSet:
    """The k lowest-index intervals of `pool`.

    Deterministic selection rule for forming scanning groups: keeps beams
    contiguous whenever the remaining pool is contiguous.
    """
    if k < 1:
        raise ValueError(f"prefix size must be >= 1, got {k}")
    if k > len(pool):
        raise ValueError(f"prefix size {k} exceeds pool size {len(pool)}")
    return IntervalSet._from_sorted(pool.indices[:k])
