"""Standard Young tableaux stored as growth paths.

A tableau of size n is the sequence of boxes in the order they receive the
entries 1..n.  Every prefix of the path is a diagram, and that is the only
invariant; the entry grid is derived on demand.
"""

from __future__ import annotations

import json
from collections.abc import Iterator, Sequence

import numpy as np

from .diagrams import Box, Diagram, from_boxes
from .errors import InvalidPrefix

Tableau = tuple[Box, ...]


def validate(path: Sequence[Sequence[int]]) -> Tableau:
    """Check every prefix is downward closed; return the path as a tuple of boxes.

    Raises InvalidPrefix(k) for the first offending prefix length k.
    """
    heights: dict[tuple[int, int], int] = {}
    out = []
    for k, b in enumerate(path, start=1):
        x, y, z = b
        if min(x, y, z) < 0 or heights.get((x, y), 0) != z:
            raise InvalidPrefix(k)
        if x and heights.get((x - 1, y), 0) <= z:
            raise InvalidPrefix(k)
        if y and heights.get((x, y - 1), 0) <= z:
            raise InvalidPrefix(k)
        heights[x, y] = z + 1
        out.append(Box(x, y, z))
    return tuple(out)


def is_valid(path) -> bool:
    try:
        validate(path)
    except InvalidPrefix:
        return False
    return True


def canonical_tableau(shape: Diagram) -> Tableau:
    """Boxes of ``shape`` in layer order: by z, then y, then x."""
    return tuple(sorted(shape.boxes, key=lambda b: (b.z, b.y, b.x)))


def shape_of(path: Sequence[Sequence[int]]) -> Diagram:
    return from_boxes(path)


def entry_grid(path: Sequence[Sequence[int]]) -> dict[Box, int]:
    return {Box(*b): k for k, b in enumerate(path, start=1)}


def all_tableaux(shape: Diagram) -> Iterator[Tableau]:
    """Every standard tableau of ``shape`` by depth-first path enumeration.

    Used as a brute-force oracle; the count is the dimension of the shape.
    """
    target = {(x, y): h for y, row in enumerate(shape.rows) for x, h in enumerate(row)}
    heights: dict[tuple[int, int], int] = {}
    path: list[Box] = []
    n = shape.n

    def frontier():
        for (x, y), h in target.items():
            z = heights.get((x, y), 0)
            if z >= h:
                continue
            if x and heights.get((x - 1, y), 0) <= z:
                continue
            if y and heights.get((x, y - 1), 0) <= z:
                continue
            yield Box(x, y, z)

    def rec():
        if len(path) == n:
            yield tuple(path)
            return
        for b in sorted(frontier()):
            heights[b.x, b.y] = b.z + 1
            path.append(b)
            yield from rec()
            path.pop()
            if b.z:
                heights[b.x, b.y] = b.z
            else:
                del heights[b.x, b.y]

    yield from rec()


def to_array(path: Sequence[Sequence[int]]) -> np.ndarray:
    return np.asarray(path, dtype=np.int64).reshape(-1, 3)


def from_array(arr: np.ndarray) -> Tableau:
    return tuple(Box(int(x), int(y), int(z)) for x, y, z in arr)


def dumps_tableau(path: Sequence[Sequence[int]]) -> str:
    return json.dumps([list(b) for b in path], separators=(",", ":"))


def loads_tableau(src) -> Tableau:
    obj = json.loads(src) if isinstance(src, (str, bytes)) else src
    if not isinstance(obj, list) or not all(isinstance(b, list) and len(b) in (2, 3) for b in obj):
        raise InvalidPrefix(0, "tableau JSON must be an array of [x,y,z] triples")
    return validate([tuple(b) + (0,) * (3 - len(b)) for b in obj])
