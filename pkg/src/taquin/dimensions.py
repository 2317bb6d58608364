"""Exact dimensions (numbers of standard tableaux) with Python big integers.

2D shapes use the hook-length formula.  3D shapes use the branching rule
dim(d) = sum of dim(d - c) over removable corners c, memoized on the
canonical row form.  ``max_dim_search`` enumerates all plane partitions
level by level, keeping one representative per orbit of the six axis
permutations.
"""

from __future__ import annotations

import json
import math
import threading
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .diagrams import (
    Box,
    Diagram,
    Rows,
    _removable_cols,
    _shrink,
    add_box,
    corners,
    from_boxes,
    remove_box,
)
from .errors import NotACover, NotPlanar, SizeLimitExceeded

DEFAULT_SIZE_CAP = 70
MAX_DIM_CAP = 33


def hook_dim_2d(d: Diagram) -> int:
    if not d.is_planar:
        raise NotPlanar(f"{d!r} has boxes above z = 0")
    parts = [len(r) for r in d.rows]
    conj = [sum(1 for p in parts if p > x) for x in range(parts[0])] if parts else []
    prod = 1
    for y, p in enumerate(parts):
        for x in range(p):
            prod *= (p - x - 1) + (conj[x] - y - 1) + 1
    return math.factorial(d.n) // prod


class DimCache:
    """Memo of exact dimensions keyed by canonical row form.

    Bounded: inserting past ``max_entries`` raises SizeLimitExceeded instead
    of evicting.  Reads are plain dict lookups and inserts use setdefault,
    so concurrent use from threads is safe (racing writers store equal values).
    """

    def __init__(self, max_entries: int = 5_000_000):
        self.max_entries = max_entries
        self.table: dict[Rows, int] = {(): 1}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.table)

    def __contains__(self, d: Diagram) -> bool:
        return d.rows in self.table

    def get(self, d: Diagram):
        return self.table.get(d.rows)

    def put(self, d: Diagram, value: int) -> int:
        with self._lock:
            if len(self.table) >= self.max_entries and d.rows not in self.table:
                raise SizeLimitExceeded(f"dimension cache is full ({self.max_entries} entries)")
            return self.table.setdefault(d.rows, value)


def _dim_rows(rows: Rows, memo: dict, max_entries: int) -> int:
    v = memo.get(rows)
    if v is not None:
        return v
    total = 0
    for x, y, _ in _removable_cols(rows):
        total += _dim_rows(_shrink(rows, x, y), memo, max_entries)
    if len(memo) >= max_entries:
        raise SizeLimitExceeded(f"dimension cache is full ({max_entries} entries)")
    return memo.setdefault(rows, total)


def exact_dim_3d(d: Diagram, cache: DimCache | None = None, size_cap: int = DEFAULT_SIZE_CAP) -> int:
    """Number of growth paths from the empty diagram to ``d``."""
    if d.n > size_cap:
        raise SizeLimitExceeded(f"size {d.n} exceeds the exact-dimension cap {size_cap}")
    if cache is None:
        cache = DimCache()
    return _dim_rows(d.rows, cache.table, cache.max_entries)


def is_cover(prev: Diagram, nxt: Diagram) -> Box | None:
    """The box b with nxt == prev + b, or None."""
    if nxt.n != prev.n + 1:
        return None
    for c in corners(nxt).removable:
        if remove_box(nxt, c) == prev:
            return c
    return None


def exact_cotransition(prev: Diagram, nxt: Diagram, cache: DimCache | None = None,
                       size_cap: int = DEFAULT_SIZE_CAP) -> tuple[Fraction, float]:
    """dim(prev)/dim(nxt) exactly and as a float."""
    if is_cover(prev, nxt) is None:
        raise NotACover(f"{nxt!r} is not {prev!r} plus one box")
    cache = cache if cache is not None else DimCache()
    p = Fraction(exact_dim_3d(prev, cache, size_cap), exact_dim_3d(nxt, cache, size_cap))
    return p, float(p)


# --- level sweep over the sub-diagrams of one target ------------------------

LEVEL_CHUNK = 1 << 20


def _coprime_moduli(k: int) -> list[int]:
    out: list[int] = []
    m = (1 << 58) - 1
    while len(out) < k:
        if all(math.gcd(m, q) == 1 for q in out):
            out.append(m)
        m -= 2
    return out


def _crt(residues, moduli) -> int:
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        t = ((int(r) - x) * pow(m, -1, q)) % q
        x += m * t
        m *= q
    return x


def _merge(keys, vals, approx, mods):
    order = np.argsort(keys)
    keys = keys[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    return (keys[starts], np.add.reduceat(vals[order], starts, axis=0) % mods,
            np.add.reduceat(approx[order], starts))


def corner_dims(d: Diagram, n_moduli: int = 4) -> tuple[int, dict[Box, int]]:
    """dim(d) and dim(d - c) for every removable corner c.

    Sweeps the sub-diagrams of ``d`` level by level, each packed into one
    64-bit mixed-radix key (one digit per column height), with counts held
    modulo ``n_moduli`` coprime 58-bit moduli and rebuilt by CRT.  A float
    copy of every count guards the reconstruction.  Memory is two levels of
    the sweep, which reaches size 60 where the memoized recursion cannot.
    """
    cells = [(x, y) for y, row in enumerate(d.rows) for x in range(len(row))]
    if not cells:
        return 1, {}
    where = {c: i for i, c in enumerate(cells)}
    base = np.array([d.rows[y][x] + 1 for x, y in cells], dtype=np.int64)
    if math.prod(int(b) for b in base) >= 1 << 63:
        raise SizeLimitExceeded(f"{d!r} has too many sub-diagrams for 64-bit keys")
    radix = np.cumprod(np.r_[1, base[:-1]]).astype(np.int64)
    behind = [[j for j in (where.get((x - 1, y)), where.get((x, y - 1))) if j is not None]
              for x, y in cells]
    mods = np.array(_coprime_moduli(n_moduli), dtype=np.uint64)

    keys = np.zeros(1, dtype=np.int64)
    vals = np.ones((1, n_moduli), dtype=np.uint64)
    approx = np.ones(1)
    prev = None
    for _ in range(d.n):
        prev = (keys, vals, approx)
        parts = []
        for s in range(0, len(keys), LEVEL_CHUNK):
            kk, vv, ff = keys[s:s + LEVEL_CHUNK], vals[s:s + LEVEL_CHUNK], approx[s:s + LEVEL_CHUNK]
            ck, cv, cf = [], [], []
            for i in range(len(cells)):
                h = (kk // radix[i]) % base[i]
                ok = h < base[i] - 1
                for j in behind[i]:
                    ok &= h < (kk // radix[j]) % base[j]
                ck.append(kk[ok] + radix[i])
                cv.append(vv[ok])
                cf.append(ff[ok])
            parts.append(_merge(np.concatenate(ck), np.concatenate(cv), np.concatenate(cf), mods))
        keys, vals, approx = _merge(*(np.concatenate(p) for p in zip(*parts)), mods)

    moduli = [int(q) for q in mods]

    def rebuild(row, f):
        v = _crt(row, moduli)
        if abs(v - f) > 1e-9 * f:
            raise SizeLimitExceeded(f"dimension exceeds {n_moduli} moduli; raise n_moduli")
        return v

    total = rebuild(vals[0], approx[0])
    index = {int(k): i for i, k in enumerate(prev[0])}
    out = {}
    for c in corners(d).removable:
        j = index[int(keys[0] - radix[where[(c.x, c.y)]])]
        out[c] = rebuild(prev[1][j], prev[2][j])
    return total, out


def cotransitions_by_levels(d: Diagram, n_moduli: int = 4) -> dict[Box, Fraction]:
    """Exact co-transition probabilities into ``d`` through each removable corner."""
    total, sub = corner_dims(d, n_moduli)
    return {c: Fraction(v, total) for c, v in sub.items()}


# --- axis symmetries on row form --------------------------------------------

def _conj(p: tuple[int, ...]) -> tuple[int, ...]:
    if not p:
        return ()
    return tuple(sum(1 for v in p if v > z) for z in range(p[0]))


def _swap_xy(rows: Rows) -> Rows:
    if not rows:
        return rows
    return tuple(
        tuple(rows[y][x] for y in range(len(rows)) if x < len(rows[y]))
        for x in range(len(rows[0]))
    )


def _swap_xz(rows: Rows) -> Rows:
    return tuple(_conj(r) for r in rows)


def _swap_yz(rows: Rows) -> Rows:
    if not rows:
        return rows
    cols = [_conj(c) for c in _swap_xy(rows)]
    return tuple(
        tuple(c[z] for c in cols if z < len(c))
        for z in range(len(cols[0]))
    )


def orbit(rows: Rows) -> set[Rows]:
    """Row forms of all images of a diagram under the six axis permutations."""
    a = _swap_xy(rows)
    b = _swap_xz(rows)
    return {rows, a, b, _swap_yz(rows), _swap_xy(b), _swap_xz(a)}


@dataclass
class LevelMax:
    size: int
    dim: int
    argmax: list[Diagram]  # every maximizer, all orientations

    @property
    def best(self) -> Diagram:
        """Maximizer with the lexicographically smallest JSON row form."""
        return min(self.argmax, key=lambda d: json.dumps([list(r) for r in d.rows], separators=(",", ":")))


COVERS_PER_CHUNK = 1 << 22


def _decode(row) -> Diagram:
    return from_boxes([Box(int(v) >> 20, (int(v) >> 10) & 1023, int(v) & 1023) for v in row])


def _row_chunks(n_rows: int, k: int):
    step = max(1, COVERS_PER_CHUNK // (k + 1))
    for lo in range(0, n_rows, step):
        yield lo, min(n_rows, lo + step)


def max_dim_levels(n: int, size_cap: int = MAX_DIM_CAP) -> Iterator[LevelMax]:
    """Yield the maximum dimension over all plane partitions of size 1..n.

    Level k holds one representative per orbit of the axis permutations,
    with the summed dimension over the whole orbit; pushing that total to
    every cover of the representative and summing gives the orbit totals at
    level k+1 (each cover relation is counted once per orbit element).

    Representatives are sorted arrays of packed boxes, canonicalized in
    compiled code.  Covers are grouped by a 64-bit hash of the canonical
    form in a first pass; a second pass stores one form per hash and checks
    every other cover against it, so a collision raises instead of merging.
    Totals are kept modulo two coprime moduli and rebuilt exactly (CRT)
    for the maximizers only.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > size_cap:
        raise SizeLimitExceeded(f"size {n} exceeds the max-dimension cap {size_cap}")
    moduli = _coprime_moduli(2)
    mods = np.array(moduli, dtype=np.uint64)
    rows = np.zeros((1, 0), dtype=np.uint32)
    res = np.ones((1, 2), dtype=np.uint64)
    approx = np.ones(1)
    for k in range(n):
        parts = []
        for lo, hi in _row_chunks(len(rows), k):
            cnt = _kernels.count_covers(rows, lo, hi)
            hashes = np.empty(cnt, dtype=np.uint64)
            src = np.empty(cnt, dtype=np.int64)
            _kernels.cover_hashes(rows, lo, hi, hashes, src)
            parts.append(_merge(hashes, res[src], approx[src], mods))
        keys, res, approx = _merge(*(np.concatenate(p) for p in zip(*parts)), mods)

        out = np.empty((len(keys), k + 1), dtype=np.uint32)
        sizes = np.zeros(len(keys), dtype=np.int64)
        filled = np.zeros(len(keys), dtype=np.bool_)
        for lo, hi in _row_chunks(len(rows), k):
            if not _kernels.fill_covers(rows, lo, hi, keys, out, sizes, filled):
                raise RuntimeError(f"64-bit hash collision at size {k + 1}")
        rows = out

        per_dim = approx / sizes
        top = per_dim.max()
        exact = {}
        for i in np.flatnonzero(per_dim >= top * (1 - 1e-9)):
            total = _crt(res[i], moduli)
            if abs(total - approx[i]) > 1e-9 * approx[i]:
                raise SizeLimitExceeded("orbit total exceeds the modular range")
            dim, rem = divmod(total, int(sizes[i]))
            assert rem == 0
            exact[int(i)] = dim
        best = max(exact.values())
        arg: list[Rows] = []
        for i, dim in exact.items():
            if dim == best:
                arg.extend(orbit(_decode(rows[i]).rows))
        yield LevelMax(k + 1, best, [Diagram(r) for r in sorted(arg)])


def max_dim_search(n: int, size_cap: int = MAX_DIM_CAP) -> tuple[Diagram, int]:
    for lm in max_dim_levels(n, size_cap):
        pass
    return lm.best, lm.dim


@dataclass
class GreedyStep:
    diagram: Diagram
    box: Box
    probability: Fraction

    @property
    def size(self) -> int:
        return self.diagram.n


def greedy_sequence_exact(n_max: int, cache: DimCache | None = None,
                          size_cap: int = DEFAULT_SIZE_CAP) -> list[GreedyStep]:
    """Greedy chain from the empty diagram adding, at each step, the box of
    minimal exact co-transition probability (ties: smallest box)."""
    if n_max > size_cap:
        raise SizeLimitExceeded(f"size {n_max} exceeds the exact-dimension cap {size_cap}")
    cache = cache if cache is not None else DimCache()
    cur = Diagram()
    out = []
    for _ in range(n_max):
        base = exact_dim_3d(cur, cache, size_cap)
        best = None
        for b in corners(cur).addable:
            cand = add_box(cur, b)
            dim = exact_dim_3d(cand, cache, size_cap)
            if best is None or dim > best[0]:
                best = (dim, b, cand)
        dim, b, cur = best
        out.append(GreedyStep(cur, b, Fraction(base, dim)))
    return out
