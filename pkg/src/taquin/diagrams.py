"""Young diagrams and plane partitions.

A diagram is stored in row form: ``rows[y][x]`` is the height of the stack
of boxes over the cell ``(x, y)``, i.e. the diagram contains ``(x, y, z)``
exactly when ``z < rows[y][x]``.  Rows are non-increasing in ``x``, columns
non-increasing in ``y``, and zero entries are never stored, so the row form
is canonical.  A 2D Young diagram is the special case where every height
is 1.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from itertools import permutations
from typing import NamedTuple

from .errors import IllegalCorner, MonotonicityViolation, NotPlanar

Rows = tuple[tuple[int, ...], ...]


class Box(NamedTuple):
    x: int
    y: int
    z: int = 0


ORIGIN = Box(0, 0, 0)


class CornerSet(NamedTuple):
    addable: list[Box]
    removable: list[Box]


class Diagram:
    """Immutable plane partition (a downward-closed finite set of boxes)."""

    __slots__ = ("_boxes", "n", "rows")

    def __init__(self, rows: Rows = ()):
        # Trusted constructor: ``rows`` must already be canonical.
        # Use from_rows() for unchecked input.
        self.rows = rows
        self.n = sum(sum(r) for r in rows)
        self._boxes = None

    def height(self, x: int, y: int) -> int:
        if y < len(self.rows):
            row = self.rows[y]
            if x < len(row):
                return row[x]
        return 0

    def __contains__(self, b) -> bool:
        x, y, z = b
        return x >= 0 and y >= 0 and 0 <= z < self.height(x, y)

    @property
    def boxes(self) -> tuple[Box, ...]:
        """All boxes in lexicographic (x, y, z) order."""
        if self._boxes is None:
            self._boxes = tuple(sorted(
                Box(x, y, z)
                for y, row in enumerate(self.rows)
                for x, h in enumerate(row)
                for z in range(h)
            ))
        return self._boxes

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.boxes)

    def __eq__(self, other) -> bool:
        return isinstance(other, Diagram) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"Diagram({dumps_diagram(self)})"

    @property
    def is_planar(self) -> bool:
        return all(h == 1 for row in self.rows for h in row)

    def extent(self) -> tuple[int, int, int]:
        """Bounding box sizes along x, y and z."""
        if not self.rows:
            return (0, 0, 0)
        return (len(self.rows[0]), len(self.rows), self.rows[0][0])


EMPTY = Diagram(())


def from_rows(rows: Sequence[Sequence[int]]) -> Diagram:
    """Build a diagram from the nested stack-height notation, e.g. ``[[2, 1], [1]]``."""
    out = []
    prev: tuple[int, ...] | None = None
    for y, row in enumerate(rows):
        row = tuple(int(h) for h in row)
        if not row:
            raise MonotonicityViolation(f"row {y} is empty")
        for x, h in enumerate(row):
            if h <= 0:
                raise MonotonicityViolation(f"non-positive height at ({x},{y})")
            if x and h > row[x - 1]:
                raise MonotonicityViolation(f"height increases along x at ({x},{y})")
            if prev is not None and (x >= len(prev) or h > prev[x]):
                raise MonotonicityViolation(f"height increases along y at ({x},{y})")
        out.append(row)
        prev = row
    return Diagram(tuple(out))


def to_rows(d: Diagram) -> list[list[int]]:
    return [list(r) for r in d.rows]


def from_partition(parts: Sequence[int]) -> Diagram:
    """2D Young diagram of the partition ``parts`` (row ``y`` has ``parts[y]`` boxes)."""
    for y in range(1, len(parts)):
        if parts[y] > parts[y - 1]:
            raise MonotonicityViolation(f"partition {list(parts)} is not non-increasing")
    if any(p <= 0 for p in parts):
        raise MonotonicityViolation(f"partition {list(parts)} has non-positive parts")
    return Diagram(tuple((1,) * int(p) for p in parts))


def to_partition(d: Diagram) -> list[int]:
    if not d.is_planar:
        raise NotPlanar(f"{d!r} has boxes above z = 0")
    return [len(r) for r in d.rows]


def from_boxes(boxes: Iterable[Sequence[int]]) -> Diagram:
    """Diagram with exactly the given boxes; raises if not downward closed."""
    bset = {Box(*b) for b in boxes}
    for x, y, z in bset:
        if min(x, y, z) < 0:
            raise MonotonicityViolation(f"negative coordinate in {(x, y, z)}")
        for p in ((x - 1, y, z), (x, y - 1, z), (x, y, z - 1)):
            if min(p) >= 0 and p not in bset:
                raise MonotonicityViolation(f"box {(x, y, z)} is missing predecessor {p}")
    heights: dict[tuple[int, int], int] = {}
    for x, y, _ in bset:
        heights[x, y] = heights.get((x, y), 0) + 1
    ny = max((y for _, y in heights), default=-1) + 1
    rows = []
    for y in range(ny):
        row = []
        x = 0
        while (x, y) in heights:
            row.append(heights[x, y])
            x += 1
        rows.append(tuple(row))
    return Diagram(tuple(rows))


def _addable_cols(rows: Rows):
    """Yield ``(x, y, h)`` for every cell whose stack can grow by one box."""
    for y, row in enumerate(rows):
        prev = rows[y - 1] if y else None
        for x in range(len(row) + 1):
            h = row[x] if x < len(row) else 0
            if x and row[x - 1] <= h:
                continue
            if prev is not None and (x >= len(prev) or prev[x] <= h):
                continue
            yield x, y, h
    yield 0, len(rows), 0


def _removable_cols(rows: Rows):
    """Yield ``(x, y, h)`` for every cell whose top box can be removed."""
    ny = len(rows)
    for y, row in enumerate(rows):
        nxt = rows[y + 1] if y + 1 < ny else ()
        nx = len(row)
        for x, h in enumerate(row):
            if x + 1 < nx and row[x + 1] >= h:
                continue
            if x < len(nxt) and nxt[x] >= h:
                continue
            yield x, y, h


def _grow(rows: Rows, x: int, y: int) -> Rows:
    if y == len(rows):
        return rows + ((1,),)
    row = rows[y]
    if x == len(row):
        row = row + (1,)
    else:
        row = row[:x] + (row[x] + 1,) + row[x + 1:]
    return rows[:y] + (row,) + rows[y + 1:]


def _shrink(rows: Rows, x: int, y: int) -> Rows:
    row = rows[y]
    h = row[x]
    if h > 1:
        return rows[:y] + (row[:x] + (h - 1,) + row[x + 1:],) + rows[y + 1:]
    # a removable stack of height 1 is the last cell of its row
    if len(row) == 1:
        return rows[:y] + rows[y + 1:]
    return rows[:y] + (row[:-1],) + rows[y + 1:]


def corners(d: Diagram) -> CornerSet:
    addable = sorted(Box(x, y, h) for x, y, h in _addable_cols(d.rows))
    removable = sorted(Box(x, y, h - 1) for x, y, h in _removable_cols(d.rows))
    return CornerSet(addable, removable)


def is_addable(d: Diagram, b: Sequence[int]) -> bool:
    x, y, z = b
    if min(x, y, z) < 0 or d.height(x, y) != z:
        return False
    if x and d.height(x - 1, y) <= z:
        return False
    if y and d.height(x, y - 1) <= z:
        return False
    return True


def is_removable(d: Diagram, b: Sequence[int]) -> bool:
    x, y, z = b
    if min(x, y, z) < 0 or d.height(x, y) != z + 1:
        return False
    return d.height(x + 1, y) <= z and d.height(x, y + 1) <= z


def add_box(d: Diagram, b: Sequence[int]) -> Diagram:
    if not is_addable(d, b):
        raise IllegalCorner(f"{tuple(b)} is not an addable corner of {d!r}")
    return Diagram(_grow(d.rows, b[0], b[1]))


def remove_box(d: Diagram, b: Sequence[int]) -> Diagram:
    if not is_removable(d, b):
        raise IllegalCorner(f"{tuple(b)} is not a removable corner of {d!r}")
    return Diagram(_shrink(d.rows, b[0], b[1]))


def intersection(a: Diagram, b: Diagram) -> Diagram:
    rows = []
    for ra, rb in zip(a.rows, b.rows):
        row = tuple(h for h in (min(p, q) for p, q in zip(ra, rb)) if h > 0)
        if not row:
            break
        rows.append(row)
    return Diagram(tuple(rows))


def permute_axes(d: Diagram, perm: Sequence[int]) -> Diagram:
    """Relabel axes: the new box is ``(b[perm[0]], b[perm[1]], b[perm[2]])``."""
    return from_boxes(tuple(b[i] for i in perm) for b in d.boxes)


AXIS_PERMUTATIONS = tuple(permutations(range(3)))


def enumerate_diagrams(n: int) -> list[Diagram]:
    """All plane partitions of size ``n``, sorted by row form."""
    level = {()}
    for _ in range(n):
        level = {_grow(rows, x, y) for rows in level for x, y, _ in _addable_cols(rows)}
    return [Diagram(r) for r in sorted(level)]


def dumps_diagram(d: Diagram, planar: bool = False) -> str:
    """Compact JSON row form; ``planar=True`` emits the flat 2D partition."""
    obj = to_partition(d) if planar else to_rows(d)
    return json.dumps(obj, separators=(",", ":"))


def loads_diagram(src) -> Diagram:
    """Parse a 2D (``[4,4,3,3,1]``) or 3D (``[[2,1],[1]]``) JSON diagram."""
    obj = json.loads(src) if isinstance(src, (str, bytes)) else src
    if not isinstance(obj, list):
        raise MonotonicityViolation("diagram JSON must be an array")
    if not obj:
        return EMPTY
    if all(isinstance(v, int) for v in obj):
        return from_partition(obj)
    if all(isinstance(v, list) and all(isinstance(h, int) for h in v) for v in obj):
        return from_rows(obj)
    raise MonotonicityViolation("diagram JSON must be a flat or two-level array of integers")
