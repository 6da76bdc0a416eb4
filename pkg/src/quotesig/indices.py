"""Quoted-index sets and the gaps between them.

Indices are 0-based positions in the original token sequence. An
:class:`IndexSet` is stored canonically as sorted, disjoint, non-adjacent
half-open ranges ``[start, end)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import IndexRangeError, InvalidIndexSetError


@dataclass(frozen=True)
class GapDescriptor:
    """A run of ``missing`` original tokens starting at original index ``position``."""

    position: int
    missing: int

    def __post_init__(self):
        if self.position < 0 or self.missing < 1:
            raise ValueError(f"invalid gap {self.position}+{self.missing}")


@dataclass(frozen=True)
class IndexSet:
    ranges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ranges = tuple((int(a), int(b)) for a, b in self.ranges)
        object.__setattr__(self, "ranges", ranges)
        check_ranges(ranges)

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> IndexSet:
        ranges: list[list[int]] = []
        for i in sorted(set(indices)):
            if i < 0:
                raise InvalidIndexSetError(f"negative index {i}", reason="negative-index")
            if ranges and ranges[-1][1] == i:
                ranges[-1][1] = i + 1
            else:
                ranges.append([i, i + 1])
        return cls(tuple((a, b) for a, b in ranges))

    @classmethod
    def span(cls, start: int, end: int) -> IndexSet:
        return cls(((start, end),))

    def __iter__(self) -> Iterator[int]:
        for a, b in self.ranges:
            yield from range(a, b)

    def __len__(self) -> int:
        return sum(b - a for a, b in self.ranges)

    def __contains__(self, i: object) -> bool:
        return any(a <= i < b for a, b in self.ranges)  # type: ignore[operator]

    @property
    def first(self) -> int:
        return self.ranges[0][0]

    @property
    def last(self) -> int:
        return self.ranges[-1][1] - 1

    @property
    def contiguous(self) -> bool:
        return len(self.ranges) == 1

    def check_within(self, n: int) -> None:
        if self.last >= n:
            raise IndexRangeError(f"index {self.last} out of range for {n} tokens")

    def gaps(self, n: int) -> list[GapDescriptor]:
        """Runs of original tokens not in the set, including prefix and suffix runs."""
        self.check_within(n)
        out = []
        pos = 0
        for a, b in self.ranges:
            if a > pos:
                out.append(GapDescriptor(pos, a - pos))
            pos = b
        if pos < n:
            out.append(GapDescriptor(pos, n - pos))
        return out

    def select(self, relative: IndexSet) -> IndexSet:
        """Map positions within this set (0 = first member) to absolute indices."""
        members = list(self)
        if relative.last >= len(members):
            raise IndexRangeError(
                f"sub-selection index {relative.last} out of range for a {len(members)}-token quote"
            )
        return IndexSet.from_indices(members[i] for i in relative)

    def format(self) -> str:
        return ",".join(f"{a}..{b}" for a, b in self.ranges)

    def __repr__(self) -> str:
        return f"IndexSet({self.format()})"


def check_ranges(ranges) -> None:
    """Raise :class:`InvalidIndexSetError` unless ``ranges`` is a canonical index set."""
    if not ranges:
        raise InvalidIndexSetError("index set is empty", reason="empty-index-set")
    prev = None
    for a, b in ranges:
        if a < 0:
            raise InvalidIndexSetError(f"negative index {a}", reason="negative-index")
        if b <= a:
            raise InvalidIndexSetError(f"empty range [{a},{b})", reason="empty-range")
        if prev is not None:
            if a < prev[0]:
                raise InvalidIndexSetError("ranges are not sorted", reason="unsorted-ranges")
            if a < prev[1]:
                raise InvalidIndexSetError(f"range [{a},{b}) overlaps its predecessor",
                                           reason="overlapping-ranges")
            if a == prev[1]:
                raise InvalidIndexSetError(f"range [{a},{b}) is adjacent to its predecessor",
                                           reason="adjacent-ranges")
        prev = (a, b)


def parse_selection(text: str) -> IndexSet:
    """Parse ``"0..2,5,7..9"``: half-open ``a..b`` ranges and single indices."""
    indices: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..", 1)
            start, end = int(a), int(b)
            if end <= start:
                raise InvalidIndexSetError(f"empty range {part!r}", reason="empty-range")
            indices.extend(range(start, end))
        else:
            indices.append(int(part))
    return IndexSet.from_indices(indices)
