"""Dyadic intervals, same-level interval sets, colourings and per-interval count tables.

Everything in this module is an immutable value: construction validates, and
all later operations return new objects.  Indices are plain integers, so the
practical depth of the dyadic tree is capped at :data:`MAX_LEVEL`.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

from .errors import PreconditionError

MAX_LEVEL = 30


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The closed dyadic interval ``[index * 2**-level, (index + 1) * 2**-level]``.

    Attributes:
        level: depth in the dyadic tree; the interval has length ``2**-level``.
        index: position within its level, ``0 <= index < 2**level``.
    """

    level: int
    index: int

    def __post_init__(self) -> None:
        if not isinstance(self.level, int) or not isinstance(self.index, int):
            raise PreconditionError("level and index must be integers")
        if not 0 <= self.level <= MAX_LEVEL:
            raise PreconditionError(f"level must be in [0, {MAX_LEVEL}], got {self.level}")
        if not 0 <= self.index < (1 << self.level):
            raise PreconditionError(
                f"index must be in [0, 2**{self.level}) at level {self.level}, got {self.index}"
            )

    @property
    def length(self) -> Fraction:
        return Fraction(1, 1 << self.level)

    def endpoints(self) -> Tuple[Fraction, Fraction]:
        denom = 1 << self.level
        return Fraction(self.index, denom), Fraction(self.index + 1, denom)

    def children(self) -> Tuple["DyadicInterval", "DyadicInterval"]:
        """The two half-length successors, left child first."""
        if self.level >= MAX_LEVEL:
            raise PreconditionError(f"cannot split below level {MAX_LEVEL}")
        lvl = self.level + 1
        return DyadicInterval(lvl, self.index << 1), DyadicInterval(lvl, (self.index << 1) | 1)

    def parent(self) -> "DyadicInterval":
        if self.level == 0:
            raise PreconditionError("the unit interval has no parent")
        return DyadicInterval(self.level - 1, self.index >> 1)

    def sibling(self) -> "DyadicInterval":
        """The other child of this interval's parent (its dyadic brother)."""
        if self.level == 0:
            raise PreconditionError("the unit interval has no sibling")
        return DyadicInterval(self.level, self.index ^ 1)

    def ancestor(self, level: int) -> "DyadicInterval":
        """The unique dyadic interval at ``level`` containing this one."""
        if not 0 <= level <= self.level:
            raise PreconditionError(f"ancestor level must be in [0, {self.level}], got {level}")
        return DyadicInterval(level, self.index >> (self.level - level))

    def contains(self, other: "DyadicInterval") -> bool:
        """True iff ``other`` lies inside this interval (self-containment counts)."""
        return other.level >= self.level and (other.index >> (other.level - self.level)) == self.index

    def leaf_range(self, leaf_level: int) -> range:
        """Indices of this interval's descendants at ``leaf_level``."""
        if leaf_level < self.level:
            raise PreconditionError("leaf_level must not be above this interval's level")
        shift = leaf_level - self.level
        return range(self.index << shift, (self.index + 1) << shift)


@dataclass(frozen=True)
class IntervalSet:
    """A finite, duplicate-free set of dyadic intervals sharing one level.

    Members are kept sorted left to right.  Mixing levels is rejected: a
    collection always lives inside a single row ``D_level`` of the tree.
    """

    level: int
    members: Tuple[DyadicInterval, ...]
    _indices: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.level <= MAX_LEVEL:
            raise PreconditionError(f"level must be in [0, {MAX_LEVEL}], got {self.level}")
        indices = []
        last = -1
        for m in self.members:
            if m.level != self.level:
                raise PreconditionError(
                    f"mixed levels: expected {self.level}, found member at level {m.level}"
                )
            if m.index <= last:
                raise PreconditionError("members must be sorted strictly left to right")
            last = m.index
            indices.append(m.index)
        object.__setattr__(self, "_indices", tuple(indices))

    @classmethod
    def from_intervals(cls, level: int, intervals: Iterable[DyadicInterval]) -> "IntervalSet":
        """Build from any iterable; sorts and drops duplicates."""
        members = tuple(sorted(set(intervals)))
        return cls(level, members)

    @classmethod
    def from_indices(cls, level: int, indices: Iterable[int]) -> "IntervalSet":
        uniq = sorted(set(indices))
        return cls(level, tuple(DyadicInterval(level, i) for i in uniq))

    @classmethod
    def empty(cls, level: int) -> "IntervalSet":
        return cls(level, ())

    @classmethod
    def full(cls, level: int) -> "IntervalSet":
        """All of ``D_level``."""
        return cls(level, tuple(DyadicInterval(level, i) for i in range(1 << level)))

    @property
    def indices(self) -> Tuple[int, ...]:
        return self._indices

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[DyadicInterval]:
        return iter(self.members)

    def __bool__(self) -> bool:
        return bool(self.members)

    def __contains__(self, interval: DyadicInterval) -> bool:
        if interval.level != self.level:
            return False
        pos = bisect.bisect_left(self._indices, interval.index)
        return pos < len(self._indices) and self._indices[pos] == interval.index

    def union(self, other: "IntervalSet") -> "IntervalSet":
        if other.level != self.level:
            raise PreconditionError("cannot union interval sets of different levels")
        return IntervalSet.from_indices(self.level, self._indices + other._indices)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        if other.level != self.level:
            raise PreconditionError("cannot difference interval sets of different levels")
        drop = set(other._indices)
        return IntervalSet.from_indices(self.level, (i for i in self._indices if i not in drop))

    def is_disjoint_from(self, other: "IntervalSet") -> bool:
        if other.level != self.level:
            return True
        return not set(self._indices) & set(other._indices)

    def _span(self, node: DyadicInterval) -> Tuple[int, int]:
        # slice bounds of members lying under node
        if node.level > self.level:
            raise PreconditionError("node is below this set's level")
        shift = self.level - node.level
        lo = bisect.bisect_left(self._indices, node.index << shift)
        hi = bisect.bisect_left(self._indices, (node.index + 1) << shift)
        return lo, hi

    def count_under(self, node: DyadicInterval) -> int:
        lo, hi = self._span(node)
        return hi - lo

    def under(self, node: DyadicInterval) -> Tuple[DyadicInterval, ...]:
        """Members contained in ``node``, left to right."""
        lo, hi = self._span(node)
        return self.members[lo:hi]


@dataclass(frozen=True)
class HomogeneityParams:
    """Colouring parameters: ``d`` colours and balance ratio ``eta`` with 0 < eta <= 1/2."""

    eta: Fraction
    d: int

    def __post_init__(self) -> None:
        eta = self.eta
        if not isinstance(eta, Fraction):
            eta = Fraction(eta)
            object.__setattr__(self, "eta", eta)
        if not 0 < eta <= Fraction(1, 2):
            raise PreconditionError(f"eta must satisfy 0 < eta <= 1/2, got {eta}")
        if not isinstance(self.d, int) or self.d < 1:
            raise PreconditionError(f"d must be a positive integer, got {self.d}")


@dataclass(frozen=True)
class Colouring:
    """A possibly partial assignment of colours ``1..d`` to the members of a set.

    ``assignment`` maps member intervals to colours; members missing from it
    are uncoloured.  The mapping is copied on construction and never mutated.
    """

    base: IntervalSet
    d: int
    assignment: Mapping[DyadicInterval, int]

    def __post_init__(self) -> None:
        if not isinstance(self.d, int) or self.d < 1:
            raise PreconditionError(f"d must be a positive integer, got {self.d}")
        snap: Dict[DyadicInterval, int] = dict(self.assignment)
        for interval, colour in snap.items():
            if interval not in self.base:
                raise PreconditionError(f"assigned interval {interval} is not in the base set")
            if not isinstance(colour, int) or not 1 <= colour <= self.d:
                raise PreconditionError(f"colour for {interval} must be in 1..{self.d}, got {colour}")
        object.__setattr__(self, "assignment", snap)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Colouring):
            return NotImplemented
        return (
            self.base == other.base
            and self.d == other.d
            and dict(self.assignment) == dict(other.assignment)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def is_total(self) -> bool:
        return len(self.assignment) == len(self.base)

    def colour_of(self, interval: DyadicInterval) -> Optional[int]:
        return self.assignment.get(interval)

    def uncoloured(self) -> "IntervalSet":
        """Members without a colour."""
        return IntervalSet.from_intervals(
            self.base.level, [m for m in self.base if m not in self.assignment]
        )

    def fibre(self, colour: int) -> Tuple[DyadicInterval, ...]:
        """Members carrying ``colour``, left to right."""
        if not 1 <= colour <= self.d:
            raise PreconditionError(f"colour must be in 1..{self.d}, got {colour}")
        return tuple(m for m in self.base if self.assignment.get(m) == colour)

    def with_assignments(self, extra: Mapping[DyadicInterval, int]) -> "Colouring":
        """A new colouring with ``extra`` merged in; re-colouring a member is rejected."""
        merged = dict(self.assignment)
        for interval, colour in extra.items():
            if interval in merged and merged[interval] != colour:
                raise PreconditionError(f"{interval} is already coloured {merged[interval]}")
            merged[interval] = colour
        return Colouring(self.base, self.d, merged)


@dataclass(frozen=True)
class CountTable:
    """Per-colour member counts inside one testing interval, plus the uncoloured count."""

    counts: Tuple[int, ...]
    uncoloured: int

    @property
    def total(self) -> int:
        return sum(self.counts) + self.uncoloured

    def max_count(self) -> int:
        return max(self.counts)

    def min_count(self) -> int:
        return min(self.counts)

    def argmax_colour(self) -> int:
        """Smallest colour attaining the maximum count (1-based)."""
        return self.counts.index(max(self.counts)) + 1

    def argmin_colour(self) -> int:
        """Smallest colour attaining the minimum count (1-based)."""
        return self.counts.index(min(self.counts)) + 1


def count_table(colouring: Colouring, node: DyadicInterval) -> CountTable:
    """Counts of ``colouring``'s members inside ``node``, one bucket per colour."""
    if node.level > colouring.base.level:
        raise PreconditionError("testing interval lies below the collection's level")
    counts = [0] * colouring.d
    uncoloured = 0
    for member in colouring.base.under(node):
        colour = colouring.assignment.get(member)
        if colour is None:
            uncoloured += 1
        else:
            counts[colour - 1] += 1
    return CountTable(tuple(counts), uncoloured)


def aggregate_counts(colouring: Colouring) -> Dict[DyadicInterval, CountTable]:
    """Count tables for every testing interval that contains at least one member.

    Computed bottom-up with sibling additivity, so a full scan over all
    populated nodes costs O(d * active nodes) rather than a fresh pass per node.
    """
    j = colouring.base.level
    d = colouring.d
    rows: Dict[int, list] = {}
    for member in colouring.base:
        row = rows.get(member.index)
        if row is None:
            row = rows[member.index] = [0] * (d + 1)
        colour = colouring.assignment.get(member)
        row[d if colour is None else colour - 1] += 1
    out: Dict[DyadicInterval, CountTable] = {}
    level = j
    while True:
        for idx, row in rows.items():
            out[DyadicInterval(level, idx)] = CountTable(tuple(row[:d]), row[d])
        if level == 0:
            break
        up: Dict[int, list] = {}
        for idx, row in rows.items():
            parent = idx >> 1
            acc = up.get(parent)
            if acc is None:
                up[parent] = list(row)
            else:
                for i in range(d + 1):
                    acc[i] += row[i]
        rows = up
        level -= 1
    return out
