"""Growth processes on the Young graph: pseudo-Plancherel (3D) and Plancherel (2D)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .diagrams import Box, Diagram, add_box, corners, is_addable
from .dimensions import hook_dim_2d
from .errors import BoxNotInDiagram, IllegalCorner, NotPlanar
from .rng import RandomSource
from .tableaux import Tableau, from_array


@dataclass(frozen=True)
class TransitionTable:
    diagram: Diagram
    entries: dict[Box, float]

    def total(self) -> float:
        return math.fsum(self.entries.values())


def _ray_lengths(d: Diagram, b) -> tuple[int, int, int]:
    x, y, z = b
    rx = sum(1 for h in (d.rows[y] if y < len(d.rows) else ()) if h > z)
    ry = sum(1 for row in d.rows if x < len(row) and row[x] > z)
    return rx, ry, d.height(x, y)


def hook3_length(d: Diagram, b) -> int:
    """Size of the 3D hook of ``b``: boxes of ``d`` on the three forward rays, apex once."""
    if b not in d:
        raise BoxNotInDiagram(f"{tuple(b)} is not in {d!r}")
    x, y, z = b
    rx, ry, rz = _ray_lengths(d, b)
    return (rx - x) + (ry - y) + (rz - z) - 2


def _factors(d: Diagram, b):
    x, y, z = b
    for i in range(x - 1, -1, -1):
        yield hook3_length(d, (i, y, z))
    for j in range(y - 1, -1, -1):
        yield hook3_length(d, (x, j, z))
    for k in range(z - 1, -1, -1):
        yield hook3_length(d, (x, y, k))


def pp_weight(d: Diagram, b, log_space: bool = False) -> float:
    """Pseudo-Plancherel weight of adding ``b`` to ``d``: product of h/(h+1) over
    the hooks (measured in ``d``) of the boxes behind ``b`` on each axis."""
    if not is_addable(d, b):
        raise IllegalCorner(f"{tuple(b)} is not an addable corner of {d!r}")
    if log_space:
        return sum(math.log(h / (h + 1.0)) for h in _factors(d, b))
    w = 1.0
    for h in _factors(d, b):
        w *= h / (h + 1.0)
    return w


def pp_transitions(d: Diagram, log_space: bool = False) -> TransitionTable:
    addable = corners(d).addable
    if log_space:
        logs = [pp_weight(d, b, log_space=True) for b in addable]
        top = max(logs)
        weights = [math.exp(v - top) for v in logs]
    else:
        weights = [pp_weight(d, b) for b in addable]
    total = 0.0
    for w in weights:
        total += w
    return TransitionTable(d, {b: w / total for b, w in zip(addable, weights)})


def _inverse_cdf(weights: list[float], u: float) -> int:
    # same accumulation order as the compiled sampler
    total = 0.0
    for w in weights:
        total += w
    target = u * total
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        if acc > target:
            return i
    return len(weights) - 1


def sample_pp_tableau(n: int, rng: RandomSource, log_space: bool = False, fast: bool = True) -> Tableau:
    """Random pseudo-Plancherel tableau of size ``n``; advances ``rng``.

    ``fast=False`` runs the pure-Python reference (one pp_transitions call per
    step), which draws the same stream and returns the same tableau.
    """
    if fast:
        state = np.array([rng.state], dtype=np.uint64)
        arr = _kernels.sample_pp(int(n), state, bool(log_space))
        rng.state = int(state[0])
        return from_array(arr)
    d = Diagram()
    path = []
    for _ in range(n):
        addable = corners(d).addable
        if log_space:
            logs = [pp_weight(d, b, log_space=True) for b in addable]
            top = max(logs)
            weights = [math.exp(v - top) for v in logs]
        else:
            weights = [pp_weight(d, b) for b in addable]
        b = addable[_inverse_cdf(weights, rng.random())]
        path.append(b)
        d = add_box(d, b)
    return tuple(path)


def plancherel2d_exact(d: Diagram) -> dict[Box, Fraction]:
    """2D Plancherel transition probabilities dim(d+b) / ((n+1) dim d), exactly."""
    if not d.is_planar:
        raise NotPlanar(f"{d!r} has boxes above z = 0")
    base = (d.n + 1) * hook_dim_2d(d)
    out = {}
    for b in corners(d).addable:
        if b.z:
            continue
        out[b] = Fraction(hook_dim_2d(add_box(d, b)), base)
    return out


def plancherel2d_transitions(d: Diagram) -> TransitionTable:
    return TransitionTable(d, {b: float(p) for b, p in plancherel2d_exact(d).items()})


def sample_plancherel2d_tableau(n: int, rng: RandomSource) -> Tableau:
    d = Diagram()
    path = []
    for _ in range(n):
        table = plancherel2d_exact(d)
        boxes = list(table)
        b = boxes[_inverse_cdf([float(table[c]) for c in boxes], rng.random())]
        path.append(b)
        d = add_box(d, b)
    return tuple(path)
