"""Jeu de taquin on growth paths: classic, shape-preserving and randomized.

All three variants use a single linear scan over the path.  The hole starts
at the origin; a box is touched only when it is a forward neighbour of the
hole, in which case it slides into the hole and the hole moves to its old
position.  Because boxes are scanned in entry order, the first neighbour met
is the one with the smaller entry, so no tie rule is needed.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import NamedTuple

from .diagrams import ORIGIN, Box
from .errors import EmptyTableau
from .tableaux import Tableau


class Nerve(NamedTuple):
    """Jeu de taquin path of one transformation.

    ``steps`` are the original positions of the boxes that slid, in order
    (each a unit step from the previous one, the first adjacent to the
    origin); ``end`` is the last vacated cell, i.e. the removed corner.
    """

    steps: tuple[Box, ...]
    end: Box

    def __len__(self) -> int:
        return len(self.steps)


def _is_forward_neighbour(b, ax, ay, az) -> bool:
    dx, dy, dz = b[0] - ax, b[1] - ay, b[2] - az
    return dx >= 0 and dy >= 0 and dz >= 0 and dx + dy + dz == 1


def schutz(path: Sequence[Box]) -> tuple[Tableau, Nerve]:
    """Classic transformation: drop the origin, slide, return size n-1 tableau and nerve."""
    if not path:
        raise EmptyTableau("cannot slide an empty tableau")
    out = list(path[1:])
    ax = ay = az = 0
    steps = []
    for i, b in enumerate(out):
        if _is_forward_neighbour(b, ax, ay, az):
            out[i] = Box(ax, ay, az)
            ax, ay, az = b
            steps.append(Box(ax, ay, az))
    return tuple(out), Nerve(tuple(steps), Box(ax, ay, az))


def schutz_preserve(path: Sequence[Box]) -> Tableau:
    """Shape-preserving variant: the vacated corner receives the new largest entry."""
    out, nerve = schutz(path)
    return out + (nerve.end,)


def schutz_preserve_inverse(path: Sequence[Box]) -> Tableau:
    """Inverse of :func:`schutz_preserve`.

    The hole starts at the box with the largest entry and slides backwards,
    pulling in the backward neighbour with the larger entry, until it
    reaches the origin, which then receives entry 1.
    """
    if not path:
        raise EmptyTableau("cannot slide an empty tableau")
    out = list(path[:-1])
    ax, ay, az = path[-1]
    for i in range(len(out) - 1, -1, -1):
        b = out[i]
        dx, dy, dz = ax - b[0], ay - b[1], az - b[2]
        if dx >= 0 and dy >= 0 and dz >= 0 and dx + dy + dz == 1:
            out[i] = Box(ax, ay, az)
            ax, ay, az = b
    assert (ax, ay, az) == ORIGIN, "reverse slide did not reach the origin"
    return (ORIGIN,) + tuple(out)


def _unit_axis(b) -> int:
    """Axis index of a unit box e_i, or -1."""
    if b[0] + b[1] + b[2] != 1:
        return -1
    return 0 if b[0] else (1 if b[1] else 2)


def randomize_prefix(path: Sequence[Box], rng) -> Tableau:
    """Resample the order of entries 2 and 3 when the first three boxes form an L.

    The L-shapes ``{origin, e_i, e_j}`` are the smallest diagrams with two
    growth paths.  One fair bit is drawn only in that case: bit 0 puts the
    lexicographically smaller box second, bit 1 the larger.
    """
    path = tuple(path)
    if len(path) < 3:
        return path
    b1, b2 = path[1], path[2]
    if _unit_axis(b1) < 0 or _unit_axis(b2) < 0:
        return path
    lo, hi = (b1, b2) if b1 < b2 else (b2, b1)
    if rng.bit() == 0:
        first, second = lo, hi
    else:
        first, second = hi, lo
    if first == b1:
        return path
    return (path[0], first, second) + path[3:]


def schutz_rnd(path: Sequence[Box], rng, addlast: bool = True) -> Tableau:
    """Randomized transformation: randomize the prefix, then slide."""
    out, nerve = schutz(randomize_prefix(path, rng))
    if addlast:
        return out + (nerve.end,)
    return out


def schutz_rnd_with_nerve(path: Sequence[Box], rng, addlast: bool = True) -> tuple[Tableau, Nerve]:
    out, nerve = schutz(randomize_prefix(path, rng))
    if addlast:
        out = out + (nerve.end,)
    return out, nerve


def cycle_decomposition(perm: dict) -> list[list]:
    """Cycles of a permutation given as a mapping."""
    seen = set()
    cycles = []
    for start in perm:
        if start in seen:
            continue
        cyc = []
        t = start
        while t not in seen:
            seen.add(t)
            cyc.append(t)
            t = perm[t]
        cycles.append(cyc)
    return cycles
