"""Non-crossing partitions of {1..m}, 2-colorings and matricial labels.

A block's label is (c, c) when every enclosing block carries its own color
c (or nothing encloses it), and (c, c') otherwise, where c' is the color of
the nearest differently-colored enclosing block.  With two colors c' is
simply the opposite color.  A colored partition is admitted for a shape set
J iff every label lies in J; covering blocks always get diagonal labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Tuple

Block = Tuple[int, ...]
Label = Tuple[int, int]

MAX_POINTS = 14


@dataclass(frozen=True)
class NCPartition:
    """Non-crossing set partition, blocks ordered by minimum element."""

    m: int
    blocks: Tuple[Block, ...]

    def __post_init__(self):
        seen = sorted(x for b in self.blocks for x in b)
        if seen != list(range(1, self.m + 1)):
            raise ValueError("blocks do not partition 1..%d" % self.m)
        if any(tuple(sorted(b)) != b for b in self.blocks):
            raise ValueError("blocks must be sorted")
        if tuple(sorted(self.blocks, key=min)) != self.blocks:
            raise ValueError("blocks must be ordered by minimum element")
        if self._crossing():
            raise ValueError("partition is crossing")

    @classmethod
    def from_blocks(cls, m: int, blocks) -> "NCPartition":
        """Build from blocks in any storage order; canonicalizes."""
        ordered = tuple(sorted((tuple(sorted(b)) for b in blocks), key=min))
        return cls(m, ordered)

    def _crossing(self) -> bool:
        # classic stack scan: opening a block pushes it, a block may only
        # continue while it is on top of the stack
        owner = {}
        for idx, b in enumerate(self.blocks):
            for x in b:
                owner[x] = idx
        stack = []
        nxt = {b: 0 for b in range(len(self.blocks))}
        for x in range(1, self.m + 1):
            idx = owner[x]
            if nxt[idx] == 0:
                stack.append(idx)
            elif not stack or stack[-1] != idx:
                return True
            nxt[idx] += 1
            if nxt[idx] == len(self.blocks[idx]):
                if not stack or stack[-1] != idx:
                    return True
                stack.pop()
        return False

    def parents(self) -> Tuple[int | None, ...]:
        """Index of the nearest enclosing block per block (None = covering).

        Linear stack scan: when a block opens, the block currently open
        and unclosed on top of the stack is its nearest enclosure."""
        owner = {}
        for idx, b in enumerate(self.blocks):
            for x in b:
                owner[x] = idx
        sizes = [len(b) for b in self.blocks]
        seen = [0] * len(self.blocks)
        parents: list = [None] * len(self.blocks)
        stack: list = []
        for x in range(1, self.m + 1):
            idx = owner[x]
            if seen[idx] == 0:
                parents[idx] = stack[-1] if stack else None
                stack.append(idx)
            seen[idx] += 1
            if seen[idx] == sizes[idx]:
                stack.pop()
        return tuple(parents)

    def forest_order(self) -> Tuple[int, ...]:
        """Block indices so that every parent precedes its children."""
        parents = self.parents()
        order, placed = [], set()
        pending = list(range(len(self.blocks)))
        while pending:
            rest = []
            for k in pending:
                if parents[k] is None or parents[k] in placed:
                    order.append(k)
                    placed.add(k)
                else:
                    rest.append(k)
            pending = rest
        return tuple(order)


def forest(partition: NCPartition):
    """(parents, children per block, roots, parent-first order).

    Memoized on the partition object itself: enumerate_nc shares
    partition instances per m, so the nesting structure is computed once
    and later lookups avoid rehashing the block structure."""
    cached = getattr(partition, "_forest", None)
    if cached is not None:
        return cached
    parents = partition.parents()
    children = [[] for _ in partition.blocks]
    roots = []
    for k, p in enumerate(parents):
        if p is None:
            roots.append(k)
        else:
            children[p].append(k)
    order = []
    stack = list(reversed(roots))
    while stack:
        k = stack.pop()
        order.append(k)
        stack.extend(reversed(children[k]))
    result = (parents, tuple(tuple(c) for c in children), tuple(roots),
              tuple(order))
    object.__setattr__(partition, "_forest", result)
    return result


@dataclass(frozen=True)
class ColoredNCPartition:
    partition: NCPartition
    colors: Tuple[int, ...]
    labels: Tuple[Label, ...]


def _gaps(points: Tuple[int, ...], chosen: Tuple[int, ...]):
    gaps = []
    pos = {x: i for i, x in enumerate(points)}
    for a, b in zip(chosen, chosen[1:]):
        gaps.append(points[pos[a] + 1:pos[b]])
    gaps.append(points[pos[chosen[-1]] + 1:])
    return gaps


def _nc_blocks(points: Tuple[int, ...]):
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    n = len(rest)
    for mask in range(1 << n):
        chosen = (first,) + tuple(rest[i] for i in range(n)
                                  if mask >> i & 1)
        partials = [()]
        for gap in _gaps(points, chosen):
            partials = [p + sub for p in partials for sub in _nc_blocks(gap)]
            if not partials:
                break
        for tail in partials:
            yield (chosen,) + tail


@lru_cache(maxsize=None)
def enumerate_nc(m: int) -> Tuple[NCPartition, ...]:
    """All non-crossing partitions of {1..m}; |result| = Catalan(m)."""
    if not 1 <= m <= MAX_POINTS:
        raise ValueError("m must be in 1..%d, got %d" % (MAX_POINTS, m))
    points = tuple(range(1, m + 1))
    out = []
    for blocks in _nc_blocks(points):
        ordered = tuple(sorted((tuple(sorted(b)) for b in blocks), key=min))
        out.append(NCPartition(m, ordered))
    return tuple(out)


def label_blocks(partition: NCPartition,
                 colors: Sequence[int]) -> Tuple[Label, ...]:
    """Labels induced by a block coloring, per the matricial rule."""
    if len(colors) != len(partition.blocks):
        raise ValueError("one color per block required")
    if any(c not in (1, 2) for c in colors):
        raise ValueError("colors must be 1 or 2")
    parents, _, _, order = forest(partition)
    labels: list[Label | None] = [None] * len(partition.blocks)
    mono: list[bool] = [False] * len(partition.blocks)
    for k in order:
        c, p = colors[k], parents[k]
        if p is None or (mono[p] and colors[p] == c):
            labels[k] = (c, c)
            mono[k] = True
        else:
            labels[k] = (c, 3 - c)
            mono[k] = False
    return tuple(labels)          # type: ignore[arg-type]


def label_and_admit(partition: NCPartition, colors: Sequence[int],
                    J) -> ColoredNCPartition | None:
    """Label a coloring; None when some label falls outside J."""
    labels = label_blocks(partition, colors)
    if any(lbl not in J for lbl in labels):
        return None
    return ColoredNCPartition(partition, tuple(colors), labels)


def _admissible_colorings(partition: NCPartition, J):
    parents, _, _, order = forest(partition)
    nblocks = len(partition.blocks)
    colors: list[int] = [0] * nblocks
    labels: list[Label] = [(0, 0)] * nblocks
    mono: list[bool] = [False] * nblocks

    def walk(i: int):
        if i == nblocks:
            yield ColoredNCPartition(partition, tuple(colors), tuple(labels))
            return
        k = order[i]
        p = parents[k]
        for c in (1, 2):
            if p is None or (mono[p] and colors[p] == c):
                lbl, m = (c, c), True
            else:
                lbl, m = (c, 3 - c), False
            if lbl not in J:
                continue
            colors[k], labels[k], mono[k] = c, lbl, m
            yield from walk(i + 1)

    yield from walk(0)


def enumerate_admissible(m: int, J) -> Iterator[ColoredNCPartition]:
    """All J-admissible colored non-crossing partitions of {1..m}."""
    J = frozenset(J)
    for partition in enumerate_nc(m):
        yield from _admissible_colorings(partition, J)
