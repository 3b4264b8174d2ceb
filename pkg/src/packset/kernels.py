"""Hot loops: syndrome enumeration, collision search, greedy candidate tests.

Every kernel has a numba implementation and a pure-numpy one with the
same contract. ``PACKSET_NUMBA=0`` (read at import time) or a missing
numba install selects numpy. Both are always importable as
``NUMBA_KERNELS`` / ``NUMPY_KERNELS`` so they can be compared directly.

Field elements enter as int64 keys in [0, q). For extension fields the
key packs k base-p digits, and addition is digitwise mod p.

Enumeration order is shared by both backends: weight 0, 1, ..., t; within
a weight, supports in lexicographic order; within a support, value-index
tuples in lexicographic order (last position fastest).
"""
from __future__ import annotations

from itertools import combinations
from math import comb
from types import SimpleNamespace

import numpy as np

from ._config import numba_requested

try:
    import numba
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

# direct-address tables are used by the numpy backend up to this many keys
_DIRECT_TABLE_MAX_Q = 1 << 26


def count_vectors(n_positions: int, n_values: int, wmin: int, wmax: int) -> int:
    wmax = min(wmax, n_positions)
    return sum(comb(n_positions, j) * n_values**j for j in range(wmin, wmax + 1))


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def np_add_keys(x, y, p: int, k: int):
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if k == 1:
        s = x + y
        return np.where(s >= p, s - p, s)
    out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
    w = 1
    for _ in range(k):
        d = x % p + y % p
        out += np.where(d >= p, d - p, d) * w
        x = x // p
        y = y // p
        w *= p
    return out


def _np_syndrome_keys(terms, p, k, wmin, wmax):
    n_pos, n_val = terms.shape
    chunks = []
    for j in range(wmin, min(wmax, n_pos) + 1):
        if j == 0:
            chunks.append(np.zeros(1, dtype=np.int64))
            continue
        supports = np.array(list(combinations(range(n_pos), j)), dtype=np.int64)
        values = np.indices((n_val,) * j).reshape(j, -1).T
        acc = np.zeros((len(supports), len(values)), dtype=np.int64)
        for slot in range(j):
            acc = np_add_keys(acc, terms[supports[:, slot]][:, values[:, slot]], p, k)
        chunks.append(acc.ravel())
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(chunks)


def _np_first_repeat_table(keys, q):
    """Associative-table collision search via a direct-address first-seen array."""
    if q > _DIRECT_TABLE_MAX_Q:
        return first_repeat_sort(keys)
    n = len(keys)
    first = np.full(q, -1, dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    first[keys[::-1]] = idx[::-1]
    repeats = np.flatnonzero(first[keys] != idx)
    if len(repeats) == 0:
        return -1, -1
    j = int(repeats[0])
    return int(first[keys[j]]), j


def _np_try_extend(lower, au, occupied, scratch, p, k):
    xs = np_add_keys(lower[None, :], au[:, None], p, k).ravel()
    if occupied[xs].any():
        return False
    return np.unique(xs).size == xs.size


def _np_first_addable(lower, scaled, start, occupied, scratch, p, k, batch=256):
    n = scaled.shape[0]
    for s in range(start, n, batch):
        blk = scaled[s:s + batch]
        xs = np_add_keys(blk[:, :, None], lower[None, None, :], p, k).reshape(len(blk), -1)
        bad = occupied[xs].any(axis=1)
        srt = np.sort(xs, axis=1)
        bad |= (srt[:, 1:] == srt[:, :-1]).any(axis=1)
        good = np.flatnonzero(~bad)
        if len(good):
            return s + int(good[0])
    return -1


def _np_first_zero(keys):
    hits = np.flatnonzero(keys == 0)
    return int(hits[0]) if len(hits) else -1


# ---------------------------------------------------------------------------
# shared
# ---------------------------------------------------------------------------

def first_repeat_sort(keys):
    """Sort-based collision search.

    Returns (i, j) with j the smallest index whose key already occurred and
    i that key's first occurrence, matching the table-based search.
    """
    keys = np.asarray(keys, dtype=np.int64)
    if len(keys) < 2:
        return -1, -1
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    dup = np.flatnonzero(sk[1:] == sk[:-1]) + 1
    if len(dup) == 0:
        return -1, -1
    # positions in sorted order where a run starts with a repeat: its
    # second member has the smallest original index among the repeats
    starts = dup[np.r_[True, sk[dup[1:]] != sk[dup[:-1]]]] if len(dup) > 1 else dup
    seconds = order[starts]
    best = int(np.argmin(seconds))
    j = int(seconds[best])
    i = int(order[starts[best] - 1])
    return i, j


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _nb_add(x, y, p, k):
        if k == 1:
            s = x + y
            return s - p if s >= p else s
        r = 0
        w = 1
        for _ in range(k):
            d = x % p + y % p
            if d >= p:
                d -= p
            r += d * w
            w *= p
            x //= p
            y //= p
        return r

    @njit(cache=True)
    def _nb_fill_keys(terms, p, k, wmin, wmax, out):
        n_pos, n_val = terms.shape
        n = 0
        for j in range(wmin, min(wmax, n_pos) + 1):
            if j == 0:
                out[n] = 0
                n += 1
                continue
            c = np.arange(j)
            v = np.zeros(j, dtype=np.int64)
            while True:
                v[:] = 0
                while True:
                    s = 0
                    for i in range(j):
                        s = _nb_add(s, terms[c[i], v[i]], p, k)
                    out[n] = s
                    n += 1
                    i = j - 1
                    while i >= 0 and v[i] == n_val - 1:
                        v[i] = 0
                        i -= 1
                    if i < 0:
                        break
                    v[i] += 1
                i = j - 1
                while i >= 0 and c[i] == n_pos - j + i:
                    i -= 1
                if i < 0:
                    break
                c[i] += 1
                for r in range(i + 1, j):
                    c[r] = c[r - 1] + 1
        return n

    @njit(cache=True)
    def _nb_first_repeat_hash(keys):
        n = keys.shape[0]
        size = 1
        while size < 2 * n:
            size *= 2
        mask = np.uint64(size - 1)
        slot_key = np.full(size, -1, dtype=np.int64)
        slot_idx = np.empty(size, dtype=np.int64)
        mult = np.uint64(0x9E3779B97F4A7C15)
        for j in range(n):
            key = keys[j]
            h = (np.uint64(key) * mult) >> np.uint64(17)
            pos = h & mask
            while True:
                sk = slot_key[pos]
                if sk == -1:
                    slot_key[pos] = key
                    slot_idx[pos] = j
                    break
                if sk == key:
                    return slot_idx[pos], j
                pos = (pos + np.uint64(1)) & mask
        return -1, -1

    @njit(cache=True)
    def _nb_try_extend(lower, au, occupied, scratch, p, k):
        n_a = au.shape[0]
        n_l = lower.shape[0]
        marked = np.empty(n_a * n_l, dtype=np.int64)
        n = 0
        ok = True
        for a in range(n_a):
            for i in range(n_l):
                x = _nb_add(lower[i], au[a], p, k)
                if occupied[x] or scratch[x]:
                    ok = False
                    break
                scratch[x] = 1
                marked[n] = x
                n += 1
            if not ok:
                break
        for i in range(n):
            scratch[marked[i]] = 0
        return ok

    @njit(cache=True)
    def _nb_first_addable(lower, scaled, start, occupied, scratch, p, k):
        for c in range(start, scaled.shape[0]):
            if _nb_try_extend(lower, scaled[c], occupied, scratch, p, k):
                return c
        return -1

    @njit(cache=True)
    def _nb_first_zero(keys):
        for i in range(keys.shape[0]):
            if keys[i] == 0:
                return i
        return -1

    def _nb_syndrome_keys(terms, p, k, wmin, wmax):
        terms = np.ascontiguousarray(terms, dtype=np.int64)
        n_pos, n_val = terms.shape
        out = np.empty(count_vectors(n_pos, n_val, wmin, wmax), dtype=np.int64)
        _nb_fill_keys(terms, np.int64(p), np.int64(k), wmin, wmax, out)
        return out

    def _nb_first_repeat_table(keys, q):
        i, j = _nb_first_repeat_hash(np.ascontiguousarray(keys, dtype=np.int64))
        return int(i), int(j)

    def _nb_try_extend_wrapper(lower, au, occupied, scratch, p, k):
        return bool(_nb_try_extend(lower, au, occupied, scratch, np.int64(p), np.int64(k)))

    def _nb_first_addable_wrapper(lower, scaled, start, occupied, scratch, p, k):
        return int(_nb_first_addable(lower, np.ascontiguousarray(scaled), start, occupied, scratch,
                                     np.int64(p), np.int64(k)))

    def _nb_first_zero_wrapper(keys):
        return int(_nb_first_zero(keys))


NUMPY_KERNELS = SimpleNamespace(
    name="numpy",
    syndrome_keys=_np_syndrome_keys,
    first_repeat_table=_np_first_repeat_table,
    try_extend=_np_try_extend,
    first_addable=_np_first_addable,
    first_zero=_np_first_zero,
)

if HAS_NUMBA:
    NUMBA_KERNELS = SimpleNamespace(
        name="numba",
        syndrome_keys=_nb_syndrome_keys,
        first_repeat_table=_nb_first_repeat_table,
        try_extend=_nb_try_extend_wrapper,
        first_addable=_nb_first_addable_wrapper,
        first_zero=_nb_first_zero_wrapper,
    )
else:  # pragma: no cover
    NUMBA_KERNELS = None

ACTIVE = NUMBA_KERNELS if (HAS_NUMBA and numba_requested()) else NUMPY_KERNELS


def backend_name() -> str:
    return ACTIVE.name
