"""Disjoint half-open interval set over float byte positions (MB units)."""

from __future__ import annotations

from typing import Iterable, Iterator

# Intervals closer than this (in MB, i.e. one millibyte) are merged; keeps
# float round-off from fragmenting what is logically one contiguous range.
EPS = 1e-9


class RangeSet:
    """Sorted set of disjoint [lo, hi) intervals with in-order gap filling."""

    __slots__ = ("_ranges",)

    def __init__(self, ranges: Iterable[tuple[float, float]] = ()):
        self._ranges: list[list[float]] = []
        for lo, hi in ranges:
            self.add(lo, hi)

    def add(self, lo: float, hi: float) -> None:
        """Insert [lo, hi), merging with anything it touches or overlaps."""
        if hi <= lo + EPS:
            return
        merged = [lo, hi]
        out = []
        inserted = False
        for r in self._ranges:
            if r[1] < merged[0] - EPS:
                out.append(r)
            elif r[0] > merged[1] + EPS:
                if not inserted:
                    out.append(merged)
                    inserted = True
                out.append(r)
            else:
                merged[0] = min(merged[0], r[0])
                merged[1] = max(merged[1], r[1])
        if not inserted:
            out.append(merged)
        self._ranges = out

    def gaps(self, lo: float, hi: float) -> list[tuple[float, float]]:
        """Uncovered sub-intervals of [lo, hi), in order."""
        if hi <= lo + EPS:
            return []
        out = []
        cursor = lo
        for r in self._ranges:
            if r[1] <= cursor + EPS:
                continue
            if r[0] >= hi - EPS:
                break
            if r[0] > cursor + EPS:
                out.append((cursor, min(r[0], hi)))
            cursor = max(cursor, r[1])
            if cursor >= hi - EPS:
                return out
        if cursor < hi - EPS:
            out.append((cursor, hi))
        return out

    def missing_within(self, lo: float, hi: float) -> float:
        return sum(b - a for a, b in self.gaps(lo, hi))

    def fill_in_order(self, lo: float, hi: float, amount: float) -> float:
        """Cover up to ``amount`` of the gaps in [lo, hi), lowest first.

        Returns the amount actually covered (less than ``amount`` when the
        window had fewer missing bytes).
        """
        if amount <= 0:
            return 0.0
        filled = 0.0
        for a, b in self.gaps(lo, hi):
            take = min(b - a, amount - filled)
            self.add(a, a + take)
            filled += take
            if filled >= amount - EPS:
                break
        return filled

    def prefix_end(self) -> float:
        """End of the contiguous coverage starting at 0 (0.0 if none)."""
        if self._ranges and self._ranges[0][0] <= EPS:
            return self._ranges[0][1]
        return 0.0

    def total(self) -> float:
        return sum(hi - lo for lo, hi in self._ranges)

    def covers(self, lo: float, hi: float, slack: float = EPS) -> bool:
        return self.missing_within(lo, hi) <= slack

    def __iter__(self) -> Iterator[tuple[float, float]]:
        return iter((lo, hi) for lo, hi in self._ranges)

    def __len__(self) -> int:
        return len(self._ranges)

    def __repr__(self) -> str:
        inner = ", ".join(f"[{lo:g}, {hi:g})" for lo, hi in self._ranges)
        return f"RangeSet({inner})"
