"""Reference kernels: exact, unaccelerated (numpy plus native int masks).

The semantics here are the contract.  The numba backend must return the same
answers — and for ``scan_level`` the same witness columns — on every input,
which the backend-equivalence tests enforce.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

NAME = "numpy"


def _solutions_sorted(s: int, pcols: Sequence[int], i: int) -> list[int]:
    """All column subsets of [I_s | P] XORing to unit i, as (s+r)-bit masks.

    Gray-code walk over the 2^r kernel combinations, then sorted by
    (popcount, value) so small recovery sets are tried first.
    """
    r = len(pcols)
    kernel = [pcols[t] | (1 << (s + t)) for t in range(r)]
    cur = 1 << i
    sols = [cur]
    for idx in range(1, 1 << r):
        cur ^= kernel[(idx & -idx).bit_length() - 1]
        sols.append(cur)
    sols.sort(key=lambda m: (m.bit_count(), m))
    return sols


def _pack(sols: list[int], k: int) -> bool:
    """Exact test for k pairwise-disjoint masks among sols."""
    m = len(sols)

    def dfs(union: int, start: int, need: int) -> bool:
        if need == 0:
            return True
        for j in range(start, m - need + 1):
            if union & sols[j] == 0 and dfs(union | sols[j], j + 1, need - 1):
                return True
        return False

    return dfs(0, 0, k)


def systematic_pk(s: int, k: int, pcols: Sequence[int]) -> bool:
    """Decide whether [I_s | P] offers k disjoint recovery sets per coordinate.

    pcols holds P's columns as ints over the s row bits.
    """
    cols = tuple(pcols)
    for i in range(s):
        if not _pack(_solutions_sorted(s, cols, i), k):
            return False
    return True


def _row_weights_ok(s: int, cols: Sequence[int], k: int) -> bool:
    # necessary: disjoint sets beyond the one holding column i each need a
    # parity column covering row i, so every row must have weight >= k-1
    need = k - 1
    for i in range(s):
        bit = 1 << i
        cnt = 0
        for v in cols:
            if v & bit:
                cnt += 1
                if cnt >= need:
                    break
        if cnt < need:
            return False
    return True


def scan_level(s: int, r: int, k: int) -> tuple[int, ...] | None:
    """First parity-column multiset at redundancy r passing systematic_pk.

    Candidates are nondecreasing r-tuples over 1..2^s-1 in lexicographic
    order (column order never matters; zero columns are skipped, which is
    exact when levels below r already failed — the ascending search's
    invariant).  Returns None when the whole level fails.
    """
    if r == 0:
        return () if systematic_pk(s, k, ()) else None
    top = 1 << s
    for cols in combinations_with_replacement(range(1, top), r):
        if _row_weights_ok(s, cols, k) and systematic_pk(s, k, cols):
            return cols
    return None


def certificate_ok(
    col_words: np.ndarray,
    flat: np.ndarray,
    offsets: np.ndarray,
    coords: np.ndarray,
    s: int,
    n: int,
) -> bool:
    """Validate flattened recovery sets against packed generator columns.

    Set t covers flat[offsets[t]:offsets[t+1]] and claims coordinate
    coords[t]; its columns must XOR to that unit vector and sets of one
    coordinate must be pairwise disjoint.  Sets belonging to the same
    coordinate must be contiguous in t.  Index-range and per-coordinate
    counting checks are the caller's job.
    """
    m = len(coords)
    if m == 0:
        return True
    sizes = np.diff(offsets)
    if (sizes <= 0).any():
        return False  # an empty set sums to zero, never a unit vector
    words = col_words[flat]
    acc = np.bitwise_xor.reduceat(words, offsets[:-1], axis=0)
    expect = np.zeros_like(acc)
    expect[np.arange(m), coords >> 6] = np.left_shift(
        np.uint64(1), (coords & 63).astype(np.uint64)
    )
    if not (acc == expect).all():
        return False
    keys = np.repeat(coords, sizes).astype(np.int64) * n + flat
    return len(np.unique(keys)) == len(keys)
