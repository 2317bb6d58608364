"""Compiled inner loops.

Each kernel mirrors a pure-Python routine elsewhere in the package and
consumes the SplitMix64 stream identically; tests check the two paths agree
step for step.  Tableaux are ``(n, 3)`` int64 arrays modified in place and
generator state is a one-element uint64 array.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S63 = np.uint64(63)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True, nogil=True)
def next_u64(state):
    s = state[0] + _GOLDEN
    state[0] = s
    z = (s ^ (s >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def next_double(state):
    return np.float64(next_u64(state) >> _S11) * _INV53


@njit(cache=True, nogil=True)
def _lex_less(a0, a1, a2, b0, b1, b2):
    if a0 != b0:
        return a0 < b0
    if a1 != b1:
        return a1 < b1
    return a2 < b2


@njit(cache=True, nogil=True)
def schutz_rnd_step(path, state):
    """One randomized shape-preserving step in place; returns nothing (end is path[-1])."""
    n = path.shape[0]
    if n >= 3:
        u1 = path[1, 0] + path[1, 1] + path[1, 2] == 1
        u2 = path[2, 0] + path[2, 1] + path[2, 2] == 1
        if u1 and u2:
            bit = next_u64(state) >> _S63
            b1_lo = _lex_less(path[1, 0], path[1, 1], path[1, 2], path[2, 0], path[2, 1], path[2, 2])
            # bit 0: smaller box second in path (index 1); swap when that is not the case
            if (bit == 0) != b1_lo:
                for c in range(3):
                    t = path[1, c]
                    path[1, c] = path[2, c]
                    path[2, c] = t
    ax = 0
    ay = 0
    az = 0
    for i in range(1, n):
        x = path[i, 0]
        y = path[i, 1]
        z = path[i, 2]
        dx = x - ax
        dy = y - ay
        dz = z - az
        if dx >= 0 and dy >= 0 and dz >= 0 and dx + dy + dz == 1:
            path[i - 1, 0] = ax
            path[i - 1, 1] = ay
            path[i - 1, 2] = az
            ax = x
            ay = y
            az = z
        else:
            path[i - 1, 0] = x
            path[i - 1, 1] = y
            path[i - 1, 2] = z
    path[n - 1, 0] = ax
    path[n - 1, 1] = ay
    path[n - 1, 2] = az


@njit(cache=True, nogil=True)
def run_steps(path, state, steps):
    for _ in range(steps):
        schutz_rnd_step(path, state)


@njit(cache=True, nogil=True)
def tally_ends(path, state, samples, thin, corner_index, counts):
    """Advance ``samples * thin`` steps, tallying the nerve end of every ``thin``-th."""
    n = path.shape[0]
    for _ in range(samples):
        for _ in range(thin):
            schutz_rnd_step(path, state)
        k = corner_index[path[n - 1, 0], path[n - 1, 1], path[n - 1, 2]]
        counts[k] += 1


@njit(cache=True, nogil=True)
def packed_keys(path, state, samples, thin, box_index, bits, out):
    """Advance the chain and write an exact 64-bit packing of each sampled tableau."""
    n = path.shape[0]
    b = np.uint64(bits)
    for s in range(samples):
        for _ in range(thin):
            schutz_rnd_step(path, state)
        key = np.uint64(0)
        for i in range(1, n):
            key = (key << b) | np.uint64(box_index[path[i, 0], path[i, 1], path[i, 2]])
        out[s] = key


@njit(cache=True, nogil=True)
def coverage_run(path, state, max_iters, corner_index, hits):
    """Step until every corner has been the nerve end once; returns the step count or -1."""
    n = path.shape[0]
    remaining = hits.shape[0]
    for c in range(hits.shape[0]):
        if hits[c] > 0:
            remaining -= 1
    if remaining == 0:
        return 0
    for it in range(1, max_iters + 1):
        schutz_rnd_step(path, state)
        k = corner_index[path[n - 1, 0], path[n - 1, 1], path[n - 1, 2]]
        if hits[k] == 0:
            remaining -= 1
        hits[k] += 1
        if remaining == 0:
            return it
    return -1


# --- pseudo-Plancherel growth -------------------------------------------------

@njit(cache=True, nogil=True)
def _grow2(a, size):
    out = np.zeros((size, size), dtype=a.dtype)
    out[: a.shape[0], : a.shape[1]] = a
    return out


@njit(cache=True, nogil=True)
def _hook(lx, ly, lz, x, y, z):
    return lx[y, z] - x + ly[x, z] - y + lz[x, y] - z - 2


@njit(cache=True, nogil=True)
def _log_weight(lx, ly, lz, x, y, z):
    w = 0.0
    for i in range(x - 1, -1, -1):
        h = _hook(lx, ly, lz, i, y, z)
        w += np.log(h / (h + 1.0))
    for j in range(y - 1, -1, -1):
        h = _hook(lx, ly, lz, x, j, z)
        w += np.log(h / (h + 1.0))
    for k in range(z - 1, -1, -1):
        h = _hook(lx, ly, lz, x, y, k)
        w += np.log(h / (h + 1.0))
    return w


@njit(cache=True, nogil=True)
def _weight(lx, ly, lz, x, y, z):
    # each ray is walked from the added box backwards: increasing hook length
    w = 1.0
    for i in range(x - 1, -1, -1):
        h = _hook(lx, ly, lz, i, y, z)
        w *= h / (h + 1.0)
    for j in range(y - 1, -1, -1):
        h = _hook(lx, ly, lz, x, j, z)
        w *= h / (h + 1.0)
    for k in range(z - 1, -1, -1):
        h = _hook(lx, ly, lz, x, y, k)
        w *= h / (h + 1.0)
    return w


@njit(cache=True, nogil=True)
def _is_addable(lz, x, y, z):
    # lz[x, y] is the stack height; callers guarantee x, y inside the arrays
    if lz[x, y] != z:
        return False
    if x > 0 and lz[x - 1, y] <= z:
        return False
    if y > 0 and lz[x, y - 1] <= z:
        return False
    return True


@njit(cache=True, nogil=True)
def _refresh(lx, ly, lz, cw, cx, cy, log_space):
    # recompute the cached weight of the addable box on top of column (cx, cy)
    z = lz[cx, cy]
    if _is_addable(lz, cx, cy, z):
        if log_space:
            cw[cx, cy] = _log_weight(lx, ly, lz, cx, cy, z)
        else:
            cw[cx, cy] = _weight(lx, ly, lz, cx, cy, z)


@njit(cache=True, nogil=True)
def sample_pp(n, state, log_space):
    """Grow a pseudo-Plancherel tableau of size n.

    Maintains the three ray-length tables (row length along x at (y,z),
    along y at (x,z), stack height at (x,y)) so each hook costs O(1), and a
    lexicographically sorted addable list.  Each column holds at most one
    addable box, whose weight is cached per column.  Adding b changes only
    the hooks on b's three backward rays, so only addables at the far ends
    of lines through those boxes are recomputed.  One uniform per step.
    """
    path = np.zeros((n, 3), dtype=np.int64)
    size = 8
    lx = np.zeros((size, size), dtype=np.int64)
    ly = np.zeros((size, size), dtype=np.int64)
    lz = np.zeros((size, size), dtype=np.int64)
    cw = np.zeros((size, size), dtype=np.float64)
    cw[0, 0] = 0.0 if log_space else 1.0
    cap = 16
    add = np.zeros((cap, 3), dtype=np.int64)
    m = 1  # addable list starts as [(0,0,0)]
    w = np.zeros(cap, dtype=np.float64)
    for step in range(n):
        for a in range(m):
            w[a] = cw[add[a, 0], add[a, 1]]
        if log_space:
            top = -np.inf
            for a in range(m):
                if w[a] > top:
                    top = w[a]
            for a in range(m):
                w[a] = np.exp(w[a] - top)
        total = 0.0
        for a in range(m):
            total += w[a]
        target = next_double(state) * total
        acc = 0.0
        pick = m - 1
        for a in range(m):
            acc += w[a]
            if acc > target:
                pick = a
                break
        x = add[pick, 0]
        y = add[pick, 1]
        z = add[pick, 2]
        path[step, 0] = x
        path[step, 1] = y
        path[step, 2] = z
        # grow tables so that every index up to max coordinate + 2 fits
        need = max(x, y, z) + 2
        if need >= size:
            while need >= size:
                size *= 2
            lx = _grow2(lx, size)
            ly = _grow2(ly, size)
            lz = _grow2(lz, size)
            cw = _grow2(cw, size)
        lx[y, z] += 1
        ly[x, z] += 1
        lz[x, y] += 1
        # drop the picked entry, then insert newly addable neighbours in order
        for a in range(pick, m - 1):
            add[a, 0] = add[a + 1, 0]
            add[a, 1] = add[a + 1, 1]
            add[a, 2] = add[a + 1, 2]
        m -= 1
        for c in range(3):
            nx = x + (c == 0)
            ny = y + (c == 1)
            nz = z + (c == 2)
            if not _is_addable(lz, nx, ny, nz):
                continue
            if m + 1 > cap:
                cap *= 2
                add2 = np.zeros((cap, 3), dtype=np.int64)
                add2[:m] = add[:m]
                add = add2
                w = np.zeros(cap, dtype=np.float64)
            pos = m
            for a in range(m):
                if _lex_less(nx, ny, nz, add[a, 0], add[a, 1], add[a, 2]):
                    pos = a
                    break
            for a in range(m, pos, -1):
                add[a, 0] = add[a - 1, 0]
                add[a, 1] = add[a - 1, 1]
                add[a, 2] = add[a - 1, 2]
            add[pos, 0] = nx
            add[pos, 1] = ny
            add[pos, 2] = nz
            m += 1
        # boxes with a changed hook: (i,y,z) i<=x, (x,j,z) j<=y, (x,y,k) k<=z;
        # refresh the addable ending each line through them
        for i in range(x + 1):
            _refresh(lx, ly, lz, cw, i, ly[i, z], log_space)
            _refresh(lx, ly, lz, cw, i, y, log_space)
        _refresh(lx, ly, lz, cw, lx[y, z], y, log_space)
        for j in range(y + 1):
            _refresh(lx, ly, lz, cw, lx[j, z], j, log_space)
            _refresh(lx, ly, lz, cw, x, j, log_space)
        _refresh(lx, ly, lz, cw, x, ly[x, z], log_space)
        for k in range(z + 1):
            _refresh(lx, ly, lz, cw, lx[y, k], y, log_space)
            _refresh(lx, ly, lz, cw, x, ly[x, k], log_space)
    return path


# --- orbit-reduced level search over all plane partitions -------------------
#
# A diagram of size k is a sorted uint32 array of packed boxes
# (x << 20 | y << 10 | z), which sorts lexicographically by (x, y, z).

@njit(cache=True, nogil=True)
def _contains(row, k, v):
    lo = 0
    hi = k
    while lo < hi:
        mid = (lo + hi) // 2
        if row[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo < k and row[lo] == v


@njit(cache=True, nogil=True)
def _is_new_corner(row, k, c):
    # c is addable iff it is absent and every backward neighbour is present
    if _contains(row, k, c):
        return False
    if (c >> 20) > 0 and not _contains(row, k, c - (1 << 20)):
        return False
    if ((c >> 10) & 1023) > 0 and not _contains(row, k, c - (1 << 10)):
        return False
    if (c & 1023) > 0 and not _contains(row, k, c - 1):
        return False
    return True


@njit(cache=True, nogil=True)
def _corners_of(row, k, out):
    """Addable boxes of a diagram, each generated once (from the predecessor
    along its first nonzero axis); returns how many were written."""
    if k == 0:
        out[0] = 0
        return 1
    m = 0
    for i in range(k):
        b = row[i]
        for a in range(3):
            step = 1 << (20 - 10 * a)
            c = b + step
            cx = c >> 20
            cy = (c >> 10) & 1023
            first = 0 if cx > 0 else (1 if cy > 0 else 2)
            if first == a and _is_new_corner(row, k, c):
                out[m] = c
                m += 1
    return m


@njit(cache=True, nogil=True)
def _permuted(v, p):
    x = (v >> 20) & 1023
    y = (v >> 10) & 1023
    z = v & 1023
    if p == 0:
        return (x << 20) | (y << 10) | z
    if p == 1:
        return (x << 20) | (z << 10) | y
    if p == 2:
        return (y << 20) | (x << 10) | z
    if p == 3:
        return (y << 20) | (z << 10) | x
    if p == 4:
        return (z << 20) | (x << 10) | y
    return (z << 20) | (y << 10) | x


@njit(cache=True, nogil=True)
def _canonical(src, k, images, best):
    """Write the smallest of the six axis-permuted images into ``best``;
    return the number of distinct images (the orbit size)."""
    for p in range(6):
        for i in range(k):
            images[p, i] = _permuted(src[i], p)
        images[p, :k].sort()
    arg = 0
    for p in range(1, 6):
        for i in range(k):
            if images[p, i] != images[arg, i]:
                if images[p, i] < images[arg, i]:
                    arg = p
                break
    best[:k] = images[arg, :k]
    distinct = 0
    for p in range(6):
        seen = False
        for q in range(p):
            same = True
            for i in range(k):
                if images[p, i] != images[q, i]:
                    same = False
                    break
            if same:
                seen = True
                break
        if not seen:
            distinct += 1
    return distinct


@njit(cache=True, nogil=True)
def _hash_row(row, k):
    h = np.uint64(0x9E3779B97F4A7C15)
    for i in range(k):
        z = h ^ np.uint64(row[i])
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        h = z ^ (z >> np.uint64(31))
    return h


@njit(cache=True, nogil=True)
def count_covers(rows, lo, hi):
    k = rows.shape[1]
    buf = np.empty(3 * k + 1, dtype=np.uint32)
    total = 0
    for r in range(lo, hi):
        total += _corners_of(rows[r], k, buf)
    return total


@njit(cache=True, nogil=True)
def cover_hashes(rows, lo, hi, hashes, sources):
    """Canonical covers of rows[lo:hi]: 64-bit hash and source row index."""
    k = rows.shape[1]
    buf = np.empty(3 * k + 1, dtype=np.uint32)
    grown = np.empty(k + 1, dtype=np.uint32)
    images = np.empty((6, k + 1), dtype=np.uint32)
    best = np.empty(k + 1, dtype=np.uint32)
    n = 0
    for r in range(lo, hi):
        row = rows[r]
        m = _corners_of(row, k, buf)
        for j in range(m):
            c = buf[j]
            i = 0
            while i < k and row[i] < c:
                grown[i] = row[i]
                i += 1
            grown[i] = c
            while i < k:
                grown[i + 1] = row[i]
                i += 1
            _canonical(grown, k + 1, images, best)
            hashes[n] = _hash_row(best, k + 1)
            sources[n] = r
            n += 1
    return n


@njit(cache=True, nogil=True)
def fill_covers(rows, lo, hi, keys, out, orbit_size, filled):
    """Store one canonical row per key; returns False on a hash collision."""
    k = rows.shape[1]
    buf = np.empty(3 * k + 1, dtype=np.uint32)
    grown = np.empty(k + 1, dtype=np.uint32)
    images = np.empty((6, k + 1), dtype=np.uint32)
    best = np.empty(k + 1, dtype=np.uint32)
    for r in range(lo, hi):
        row = rows[r]
        m = _corners_of(row, k, buf)
        for j in range(m):
            c = buf[j]
            i = 0
            while i < k and row[i] < c:
                grown[i] = row[i]
                i += 1
            grown[i] = c
            while i < k:
                grown[i + 1] = row[i]
                i += 1
            size = _canonical(grown, k + 1, images, best)
            idx = np.searchsorted(keys, _hash_row(best, k + 1))
            if filled[idx]:
                for t in range(k + 1):
                    if out[idx, t] != best[t]:
                        return False
            else:
                out[idx, :] = best[: k + 1]
                orbit_size[idx] = size
                filled[idx] = True
    return True
