"""Uniformity diagnostics for the randomized tableau generator."""

from __future__ import annotations

import hashlib
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from . import _kernels
from .diagrams import Box, Diagram, corners
from .errors import ExpectedTooSmall, TooFewCells
from .estimation import (
    chain_seeds,
    corner_index_grid,
    map_chains,
    split_evenly,
    start_chain,
)
from .rng import RandomSource
from .tableaux import Tableau, canonical_tableau, shape_of, to_array, validate

CHUNK = 1 << 20
DESK_CAP = 10**8


def default_iterations(dim: int) -> int:
    return min(1000 * dim, DESK_CAP)


def packing_bits(n: int) -> int | None:
    """Bits per box index for an exact 64-bit key, or None if it does not fit.

    The origin always carries entry 1, so only n-1 indices are packed.
    """
    bits = max(1, (n - 1).bit_length())
    return bits if bits * (n - 1) <= 64 else None


def fingerprint(path: Sequence[Sequence[int]]) -> int:
    """128-bit BLAKE2b fingerprint of a path's coordinate bytes."""
    data = np.asarray(path, dtype=np.int32).tobytes()
    return int.from_bytes(hashlib.blake2b(data, digest_size=16).digest(), "little")


def decode_packed(key: int, shape: Diagram) -> Tableau:
    boxes = shape.boxes
    n = shape.n
    bits = packing_bits(n)
    mask = (1 << bits) - 1
    idx = [(key >> (bits * (n - 2 - i))) & mask for i in range(n - 1)]
    return (Box(0, 0, 0),) + tuple(boxes[i] for i in idx)


@dataclass
class FrequencyHistogram:
    shape: Diagram
    counts: dict[int, int]
    iterations: int
    seed: int
    chains: int = 1
    thin: int = 1
    key_kind: str = "packed"

    @property
    def histogram_of_counts(self) -> Counter:
        """count value -> number of tableaux generated that many times."""
        return Counter(self.counts.values())

    def count_values(self, dim: int | None = None) -> np.ndarray:
        vals = np.fromiter(self.counts.values(), dtype=np.int64, count=len(self.counts))
        if dim is not None and dim > len(vals):
            vals = np.concatenate([vals, np.zeros(dim - len(vals), dtype=np.int64)])
        return vals


def _packed_run(shape, seeds_and_counts, thin, burn_in, workers, keep_every):
    n = shape.n
    bits = packing_bits(n)
    boxes = shape.boxes
    grid = corner_index_grid(shape, boxes)

    def run(arg):
        seed, k = arg
        full: Counter = Counter()
        sub: Counter = Counter()
        if not k:
            return full, sub
        path, state = start_chain(shape, seed, burn_in)
        done = 0
        buf = np.empty(min(k, CHUNK), dtype=np.uint64)
        while done < k:
            m = min(CHUNK, k - done)
            _kernels.packed_keys(path, state, m, thin, grid, bits, buf)
            keys, cnt = np.unique(buf[:m], return_counts=True)
            full.update(dict(zip(keys.tolist(), cnt.tolist())))
            if keep_every > 1:
                # positions done+1.. whose global index is a multiple of keep_every
                first = (-done - 1) % keep_every
                kk, cc = np.unique(buf[first:m:keep_every], return_counts=True)
                sub.update(dict(zip(kk.tolist(), cc.tolist())))
            done += m
        return full, sub

    return map_chains(run, seeds_and_counts, workers)


def _hashed_run(shape, seeds_and_counts, thin, burn_in, workers, keep_every):
    def run(arg):
        seed, k = arg
        full: Counter = Counter()
        sub: Counter = Counter()
        stored: dict[int, bytes] = {}
        if not k:
            return full, sub
        path, state = start_chain(shape, seed, burn_in)
        for i in range(1, k + 1):
            _kernels.run_steps(path, state, thin)
            raw = path.astype(np.int32).tobytes()
            fp = int.from_bytes(hashlib.blake2b(raw, digest_size=16).digest(), "little")
            prev = stored.setdefault(fp, raw)
            if prev != raw:
                raise RuntimeError(f"fingerprint collision on {fp:032x}")
            full[fp] += 1
            if keep_every > 1 and i % keep_every == 0:
                sub[fp] += 1
        return full, sub

    return map_chains(run, seeds_and_counts, workers)


def run_histogram(shape: Diagram, iterations: int, seed: int = 0, chains: int = 1, thin: int = 1,
                  burn_in: int = 0, workers: int = 1, report_thin: int = 1,
                  force_hash: bool = False):
    """Count how often each tableau of ``shape`` is produced by the randomized chain.

    Returns the histogram of all ``iterations`` samples.  With
    ``report_thin > 1`` a second histogram over every ``report_thin``-th
    sample of each chain is returned as well, as ``(full, thinned)``.
    """
    work = list(zip(chain_seeds(seed, chains), split_evenly(iterations, chains)))
    packed = packing_bits(shape.n) is not None and not force_hash
    runner = _packed_run if packed else _hashed_run
    results = runner(shape, work, thin, burn_in, workers, report_thin)
    full: Counter = Counter()
    sub: Counter = Counter()
    for f, s in results:
        full.update(f)
        sub.update(s)
    kind = "packed" if packed else "blake2b"
    h = FrequencyHistogram(shape, dict(full), iterations, seed, chains, thin, kind)
    if report_thin > 1:
        total = sum(sub.values())
        return h, FrequencyHistogram(shape, dict(sub), total, seed, chains, thin * report_thin, kind)
    return h


def chi_square_uniform(h: FrequencyHistogram, dim: int) -> tuple[float, int, float]:
    """Pearson statistic against the uniform law on ``dim`` tableaux.

    Unseen tableaux each contribute the expected count.
    """
    dim = int(dim)
    if dim > np.iinfo(np.int64).max:
        raise OverflowError("dimension does not fit a machine integer")
    expected = h.iterations / dim
    if expected < 5:
        raise ExpectedTooSmall(f"expected count {expected:.3g} < 5")
    obs = h.count_values()
    stat = float(np.sum((obs - expected) ** 2) / expected) + (dim - len(obs)) * expected
    dof = dim - 1
    return stat, dof, float(sps.chi2.sf(stat, dof))


def gaussian_summary(h: FrequencyHistogram, dim: int | None = None) -> tuple[float, float]:
    """Mean and sample standard deviation of per-tableau counts (unseen ones count 0 when ``dim`` is given)."""
    vals = h.count_values(dim)
    if len(vals) < 2:
        raise TooFewCells("need at least two tableaux")
    return float(vals.mean()), float(vals.std(ddof=1))


@dataclass
class CoverageReport:
    targets: list[Box]
    hits: dict[Box, int] = field(default_factory=dict)
    iterations: int | None = None  # None: not every target was reached

    @property
    def covered(self) -> bool:
        return self.iterations is not None


def nerve_coverage(start, max_iterations: int, seed: int = 0) -> CoverageReport:
    """Iterate the randomized step from ``start`` (a diagram or a tableau) until
    every removable corner has ended a nerve at least once."""
    if isinstance(start, Diagram):
        shape = start
        path = canonical_tableau(start)
    else:
        path = validate(start)
        shape = shape_of(path)
    targets = corners(shape).removable
    grid = corner_index_grid(shape, targets)
    arr = to_array(path)
    state = np.array([RandomSource(seed).state], dtype=np.uint64)
    hits = np.zeros(len(targets), dtype=np.int64)
    it = _kernels.coverage_run(arr, state, int(max_iterations), grid, hits)
    return CoverageReport(targets, {b: int(c) for b, c in zip(targets, hits)},
                          None if it < 0 else int(it))
