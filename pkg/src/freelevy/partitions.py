"""
Set partitions of ``{1, ..., n}`` and the three families used by the
cumulant transforms: all partitions, non-crossing partitions and interval
partitions.

Partitions are generated depth-first over restricted-growth strings, so the
output of every enumerator is sorted lexicographically by that string.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import SizeLimitError

__all__ = [
    "Partition",
    "SET_PARTITION_CAP",
    "NONCROSSING_CAP",
    "INTERVAL_CAP",
    "enumerate_set_partitions",
    "enumerate_noncrossing_partitions",
    "enumerate_interval_partitions",
    "is_noncrossing",
    "is_interval",
]

SET_PARTITION_CAP = 12
NONCROSSING_CAP = 14
INTERVAL_CAP = 16


@dataclass(frozen=True)
class Partition:
    """
    A partition of ``{1, ..., n}``.

    Parameters
    ----------
    n : int
        Size of the ground set.
    blocks : tuple of tuple of int
        Disjoint, nonempty, sorted blocks covering ``1..n``. They are
        re-sorted by smallest element on construction.
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        if self.n < 1:
            raise ValueError("ground set must be nonempty")
        if any(len(b) == 0 for b in blocks):
            raise ValueError("blocks must be nonempty")
        flat = sorted(x for b in blocks for x in b)
        if flat != list(range(1, self.n + 1)):
            raise ValueError(f"blocks {blocks} do not partition 1..{self.n}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_rgs(cls, rgs) -> "Partition":
        """Build from a restricted-growth string (0-based block labels)."""
        rgs = list(rgs)
        blocks: list[list[int]] = []
        for pos, label in enumerate(rgs, start=1):
            if label == len(blocks):
                blocks.append([])
            elif not 0 <= label < len(blocks):
                raise ValueError(f"not a restricted-growth string: {rgs}")
            blocks[label].append(pos)
        return cls(len(rgs), tuple(tuple(b) for b in blocks))

    @classmethod
    def _trusted(cls, n: int, blocks) -> "Partition":
        # Generators already emit canonical blocks; skip validation.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "blocks", blocks)
        return obj

    def rgs(self) -> tuple[int, ...]:
        labels = [0] * self.n
        for label, block in enumerate(self.blocks):
            for x in block:
                labels[x - 1] = label
        return tuple(labels)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __str__(self):
        return ",".join(str(x) for x in self.rgs())


def is_noncrossing(p: Partition) -> bool:
    """True iff no ``a < b < c < d`` has ``a, c`` and ``b, d`` in two different blocks."""
    # Scan left to right with a stack of open blocks; a crossing shows up as
    # returning to a block that is not on top of the stack.
    last = {x: label for label, b in enumerate(p.blocks) for x in b}
    remaining = [len(b) for b in p.blocks]
    stack: list[int] = []
    for x in range(1, p.n + 1):
        label = last[x]
        if stack and stack[-1] == label:
            pass
        elif label in stack:
            return False
        else:
            stack.append(label)
        remaining[label] -= 1
        if remaining[label] == 0:
            stack.pop()
    return True


def is_interval(p: Partition) -> bool:
    return all(b[-1] - b[0] + 1 == len(b) for b in p.blocks)


def _check(n: int, cap: int, what: str) -> None:
    if not isinstance(n, int) or n < 1:
        raise SizeLimitError(f"{what}: n must be a positive integer, got {n!r}")
    if n > cap:
        raise SizeLimitError(f"{what}: n={n} exceeds the cap of {cap}")


# An allowed-label rule receives (position, labels so far, block mins, block lasts)
# and yields the admissible labels for the next element in increasing order.
_Rule = Callable[[int, list, list, list], Iterator[int]]


def _generate(n: int, allowed: _Rule) -> list[Partition]:
    out: list[Partition] = []
    labels: list[int] = []
    mins: list[int] = []
    lasts: list[int] = []

    def emit() -> Partition:
        blocks: list[list[int]] = [[] for _ in mins]
        for pos, label in enumerate(labels, start=1):
            blocks[label].append(pos)
        return Partition._trusted(n, tuple(map(tuple, blocks)))

    def rec(pos: int) -> None:
        if pos == n:
            out.append(emit())
            return
        for label in allowed(pos, labels, mins, lasts):
            labels.append(label)
            if label == len(mins):
                mins.append(pos)
                lasts.append(pos)
                rec(pos + 1)
                mins.pop()
                lasts.pop()
            else:
                prev = lasts[label]
                lasts[label] = pos
                rec(pos + 1)
                lasts[label] = prev
            labels.pop()

    rec(0)
    return out


def _all_labels(pos, labels, mins, lasts):
    return iter(range(len(mins) + 1))


def _noncrossing_labels(pos, labels, mins, lasts):
    # Joining block j at the current position crosses block k exactly when
    # min_k < last_j < last_k.
    for j in range(len(mins)):
        lj = lasts[j]
        if not any(mins[k] < lj < lasts[k] for k in range(len(mins)) if k != j):
            yield j
    yield len(mins)


def _interval_labels(pos, labels, mins, lasts):
    if mins:
        yield len(mins) - 1
    yield len(mins)


def enumerate_set_partitions(n: int) -> list[Partition]:
    """All partitions of ``{1..n}``; ``n <= 12``."""
    _check(n, SET_PARTITION_CAP, "enumerate_set_partitions")
    return _generate(n, _all_labels)


def enumerate_noncrossing_partitions(n: int) -> list[Partition]:
    """All non-crossing partitions of ``{1..n}``; ``n <= 14``."""
    _check(n, NONCROSSING_CAP, "enumerate_noncrossing_partitions")
    return _generate(n, _noncrossing_labels)


def enumerate_interval_partitions(n: int) -> list[Partition]:
    """All partitions of ``{1..n}`` into runs of consecutive integers; ``n <= 16``."""
    _check(n, INTERVAL_CAP, "enumerate_interval_partitions")
    return _generate(n, _interval_labels)
