"""Monte Carlo estimation of co-transition probabilities and dimensions.

Random tableaux of a fixed shape come from iterating the randomized
shape-preserving transformation.  The last box of each sampled path is the
corner through which that path entered the shape, so corner frequencies
estimate the co-transition probabilities dim(shape - c) / dim(shape).
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .diagrams import Box, Diagram, add_box, corners, dumps_diagram, intersection
from .dimensions import DimCache, exact_cotransition, exact_dim_3d, is_cover
from .errors import NotACover, ZeroFrequency
from .jdt import schutz_rnd
from .rng import RandomSource, derive_seed
from .tableaux import Tableau, canonical_tableau, to_array


def chain_seeds(seed: int, chains: int) -> list[int]:
    """Chain 0 uses the base seed; further chains derive theirs from it."""
    return [int(seed)] + [derive_seed(seed, "chain", i) for i in range(1, chains)]


def split_evenly(total: int, parts: int) -> list[int]:
    q, r = divmod(total, parts)
    return [q + (i < r) for i in range(parts)]


def map_chains(fn, args: Sequence, workers: int = 1) -> list:
    """Run ``fn`` over per-chain arguments; order of results follows ``args``."""
    if workers <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args))


def uniform_tableau_stream(shape: Diagram, seed: int = 0, burn_in: int = 0,
                           thin: int = 1) -> Iterator[Tableau]:
    """Endless chain t_0 = canonical tableau, t_{k+1} = randomized step of t_k.

    Yields t_k for k > burn_in, keeping every ``thin``-th.  Pure Python; the
    estimators below run the same chain through compiled kernels.
    """
    rng = RandomSource(seed)
    t = canonical_tableau(shape)
    for _ in range(burn_in):
        t = schutz_rnd(t, rng, addlast=True)
    while True:
        for _ in range(thin):
            t = schutz_rnd(t, rng, addlast=True)
        yield t


def start_chain(shape: Diagram, seed: int, burn_in: int = 0):
    """Canonical start tableau as an array plus kernel RNG state, after burn-in."""
    path = to_array(canonical_tableau(shape))
    state = np.array([int(seed) & ((1 << 64) - 1)], dtype=np.uint64)
    if burn_in:
        _kernels.run_steps(path, state, burn_in)
    return path, state


def corner_index_grid(shape: Diagram, boxes: Sequence[Box]) -> np.ndarray:
    ex, ey, ez = shape.extent()
    grid = np.full((ex + 1, ey + 1, ez + 1), -1, dtype=np.int64)
    for k, (x, y, z) in enumerate(boxes):
        grid[x, y, z] = k
    return grid


@dataclass
class CotransEstimate:
    shape: Diagram
    counts: dict[Box, int]
    trials: int
    seed: int
    burn_in: int = 0
    thin: int = 1
    chains: int = 1

    @property
    def frequencies(self) -> dict[Box, float]:
        return {b: c / self.trials for b, c in self.counts.items()}

    def frequency(self, b) -> float:
        return self.counts[Box(*b)] / self.trials


def estimate_cotransitions(shape: Diagram, trials: int, seed: int = 0, burn_in: int = 0,
                           thin: int = 1, chains: int = 1, workers: int = 1) -> CotransEstimate:
    if shape.n == 0:
        raise ValueError("shape must be nonempty")
    if trials < 1:
        raise ValueError("trials must be positive")
    removable = corners(shape).removable
    grid = corner_index_grid(shape, removable)

    def run(arg):
        s, k = arg
        counts = np.zeros(len(removable), dtype=np.int64)
        if k:
            path, state = start_chain(shape, s, burn_in)
            _kernels.tally_ends(path, state, k, thin, grid, counts)
        return counts

    parts = map_chains(run, list(zip(chain_seeds(seed, chains), split_evenly(trials, chains))), workers)
    total = np.sum(parts, axis=0)
    return CotransEstimate(shape, {b: int(c) for b, c in zip(removable, total)},
                           trials, seed, burn_in, thin, chains)


def shape_seed(seed: int, shape: Diagram) -> int:
    """Seed for estimating on ``shape``: independent of evaluation order."""
    return derive_seed(seed, dumps_diagram(shape))


def estimated_cotransition(prev: Diagram, nxt: Diagram, trials: int, seed: int, **kw) -> float:
    """Monte Carlo estimate of dim(prev)/dim(nxt); raises ZeroFrequency on a zero count."""
    b = is_cover(prev, nxt)
    if b is None:
        raise NotACover(f"{nxt!r} is not {prev!r} plus one box")
    est = estimate_cotransitions(nxt, trials, shape_seed(seed, nxt), **kw)
    if est.counts[b] == 0:
        raise ZeroFrequency(f"corner {tuple(b)} of {dumps_diagram(nxt)} never observed in {trials} trials")
    return est.counts[b] / trials


@dataclass
class LogDim:
    """Natural logarithm of a dimension."""

    value: float
    n: int
    provenance: str  # "exact" or "estimated"

    def decimal(self, digits: int = 6) -> str:
        """Mantissa/exponent rendering, e.g. ``1.178449e+58``."""
        if self.value == 0:
            return f"{1:.{digits}f}e+00"
        l10 = self.value / math.log(10)
        e = math.floor(l10)
        m = 10 ** (l10 - e)
        if round(m, digits) >= 10:
            m, e = m / 10, e + 1
        return f"{m:.{digits}f}e{e:+03d}"


def _log_fraction(p: Fraction) -> float:
    return math.log(p.numerator) - math.log(p.denominator)


def estimate_dim_recurrence(chain: Sequence[Diagram], trials: int = 10**5, seed: int = 0,
                            exact: bool = False, cache: DimCache | None = None,
                            **kw) -> list[LogDim]:
    """Log-dimensions along a cover chain: ln dim(l_k) = ln dim(l_{k-1}) - ln p(l_{k-1} -> l_k).

    The chain starts from a diagram of known exact dimension (usually the
    empty one).  ``exact=True`` substitutes exact co-transition probabilities.
    """
    cache = cache if cache is not None else DimCache()
    first = chain[0]
    cur = 0.0 if first.n == 0 else math.log(exact_dim_3d(first, cache))
    out = [LogDim(cur, first.n, "exact")]
    for prev, nxt in zip(chain, chain[1:]):
        if exact:
            p, _ = exact_cotransition(prev, nxt, cache)
            cur -= _log_fraction(p)
        else:
            cur -= math.log(estimated_cotransition(prev, nxt, trials, seed, **kw))
        out.append(LogDim(cur, nxt.n, "exact" if exact else "estimated"))
    return out


def lex_chain(lo: Diagram, hi: Diagram) -> list[Diagram]:
    """Cover chain from ``lo`` up to ``hi`` adding the smallest admissible box each time."""
    chain = [lo]
    cur = lo
    while cur.n < hi.n:
        b = next(b for b in corners(cur).addable if b in hi)
        cur = add_box(cur, b)
        chain.append(cur)
    if cur != hi:
        raise NotACover(f"{hi!r} does not contain {lo!r}")
    return chain


def estimate_dim_ratio(a: Diagram, b: Diagram, trials: int = 10**5, seed: int = 0,
                       exact: bool = False, cache: DimCache | None = None, **kw) -> float:
    """Estimate dim(a)/dim(b) through the common sub-diagram a & b."""
    if a == b:
        return 1.0
    mu = intersection(a, b)
    to_a = estimate_dim_recurrence(lex_chain(mu, a), trials, seed, exact, cache, **kw)
    to_b = estimate_dim_recurrence(lex_chain(mu, b), trials, seed, exact, cache, **kw)
    return math.exp(to_a[-1].value - to_b[-1].value)


@dataclass
class EstimatedStep:
    diagram: Diagram
    box: Box
    estimate: float
    candidates: dict[Box, float] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.diagram.n


def greedy_sequence_estimated(n_max: int, trials: int, seed: int = 0, **kw) -> list[EstimatedStep]:
    """Greedy chain choosing, at each step, the box of smallest estimated
    co-transition probability (ties: smallest box)."""
    cur = Diagram()
    out = []
    for _ in range(n_max):
        cand = {}
        for b in corners(cur).addable:
            cand[b] = estimated_cotransition(cur, add_box(cur, b), trials, seed, **kw)
        b = min(cand, key=lambda c: (cand[c], c))
        cur = add_box(cur, b)
        out.append(EstimatedStep(cur, b, cand[b], cand))
    return out


def normalized_dim(n: int, log_dim: float) -> float:
    """(-ln dim + (2/3) ln n!) / n^(2/3)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return (-log_dim + (2.0 / 3.0) * math.lgamma(n + 1)) / n ** (2.0 / 3.0)
