"""JIT-compiled kernels mirroring _kernels_numpy exactly.

Masks are int64, which caps the compiled paths at s + r <= 33 columns-plus-
rows per systematic candidate; wider inputs fall through to the reference
implementation.  Candidate order, solution order and returned witnesses are
identical to the reference kernels by construction (unique sort keys).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from numba import njit

from . import _kernels_numpy as _ref

NAME = "numba"

_MASK_LIMIT = 33  # sort key packs popcount above bit 33 of an int64


@njit(cache=True)
def _popcount(x: np.int64) -> np.int64:
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _pack(sols: np.ndarray, k: int) -> bool:
    # iterative depth-first search for k pairwise-disjoint masks
    if k == 0:
        return True
    m = sols.shape[0]
    choice = np.empty(k, np.int64)
    unions = np.zeros(k + 1, np.int64)
    depth = 0
    j = 0
    while True:
        advanced = False
        limit = m - (k - depth) + 1
        while j < limit:
            sm = sols[j]
            if unions[depth] & sm == 0:
                choice[depth] = j
                unions[depth + 1] = unions[depth] | sm
                depth += 1
                if depth == k:
                    return True
                j += 1
                advanced = True
                break
            j += 1
        if advanced:
            continue
        if depth == 0:
            return False
        depth -= 1
        j = choice[depth] + 1


@njit(cache=True)
def _systematic_pk(s: int, k: int, pcols: np.ndarray) -> bool:
    r = pcols.shape[0]
    nsol = 1 << r
    kernel = np.empty(r, np.int64)
    for t in range(r):
        kernel[t] = pcols[t] | (1 << (s + t))
    sols = np.empty(nsol, np.int64)
    keys = np.empty(nsol, np.int64)
    for i in range(s):
        cur = np.int64(1) << i
        sols[0] = cur
        for idx in range(1, nsol):
            v = idx
            tz = 0
            while v & 1 == 0:
                v >>= 1
                tz += 1
            cur ^= kernel[tz]
            sols[idx] = cur
        for idx in range(nsol):
            keys[idx] = (_popcount(sols[idx]) << _MASK_LIMIT) | sols[idx]
        order = np.argsort(keys)
        if not _pack(sols[order], k):
            return False
    return True


@njit(cache=True)
def _scan_level(s: int, r: int, k: int, out: np.ndarray) -> bool:
    # odometer over nondecreasing r-tuples of column values 1..2^s-1,
    # lexicographic — the same order combinations_with_replacement yields
    top = np.int64(1) << s
    cols = np.ones(r, np.int64)
    need = k - 1
    while True:
        ok = True
        for i in range(s):
            bit = np.int64(1) << i
            cnt = 0
            for t in range(r):
                if cols[t] & bit:
                    cnt += 1
            if cnt < need:
                ok = False
                break
        if ok and _systematic_pk(s, k, cols):
            out[:] = cols
            return True
        p = r - 1
        while p >= 0 and cols[p] == top - 1:
            p -= 1
        if p < 0:
            return False
        v = cols[p] + 1
        for t in range(p, r):
            cols[t] = v


@njit(cache=True)
def _certificate_ok(
    col_words: np.ndarray,
    flat: np.ndarray,
    offsets: np.ndarray,
    coords: np.ndarray,
    s: int,
    n: int,
) -> bool:
    m = coords.shape[0]
    w_count = col_words.shape[1]
    acc = np.empty(w_count, np.uint64)
    stamp = np.full(n, -1, np.int64)
    for t in range(m):
        o0 = offsets[t]
        o1 = offsets[t + 1]
        if o1 <= o0:
            return False
        for w in range(w_count):
            acc[w] = np.uint64(0)
        c = coords[t]
        for idx in range(o0, o1):
            col = flat[idx]
            if stamp[col] == c:
                return False  # column reused within this coordinate
            stamp[col] = c
            for w in range(w_count):
                acc[w] ^= col_words[col, w]
        for w in range(w_count):
            want = np.uint64(0)
            if w == c >> 6:
                want = np.uint64(1) << np.uint64(c & 63)
            if acc[w] != want:
                return False
    return True


def systematic_pk(s: int, k: int, pcols: Sequence[int]) -> bool:
    """Decide whether [I_s | P] offers k disjoint recovery sets per coordinate."""
    if s + len(pcols) > _MASK_LIMIT:
        return _ref.systematic_pk(s, k, pcols)
    return bool(_systematic_pk(s, k, np.asarray(pcols, dtype=np.int64)))


def scan_level(s: int, r: int, k: int) -> tuple[int, ...] | None:
    """First passing parity-column multiset at redundancy r; see reference kernel."""
    if s + r > _MASK_LIMIT:
        return _ref.scan_level(s, r, k)
    if r == 0:
        return () if systematic_pk(s, k, ()) else None
    out = np.empty(r, np.int64)
    if _scan_level(s, r, k, out):
        return tuple(int(v) for v in out)
    return None


def certificate_ok(
    col_words: np.ndarray,
    flat: np.ndarray,
    offsets: np.ndarray,
    coords: np.ndarray,
    s: int,
    n: int,
) -> bool:
    """Validate flattened recovery sets; same contract as the reference kernel."""
    return bool(_certificate_ok(col_words, flat, offsets, coords, s, n))
