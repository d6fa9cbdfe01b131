#!/usr/bin/env python3
"""Hot-path timing: JIT kernels vs reference kernels.

Covers the brute-force level scan (the search bottleneck), the exhaustive
parity-block census, and large-certificate validation.  Run from anywhere:

    python benchmarks/bench_backends.py
"""

import time
from itertools import chain, product

import numpy as np

from pirkit import _kernels_numba as nb
from pirkit import _kernels_numpy as ref
from pirkit.codes import construct_pir3


def best_of(fn, repeats=3):
    fn()  # warmup; first JIT touch compiles or loads the disk cache
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def census(kern, s, r, k):
    hits = 0
    for cols in product(range(1 << s), repeat=r):
        if kern.systematic_pk(s, k, cols):
            hits += 1
    return hits


def flatten_certificate(code):
    cert = code.certificate
    m = cert.s * cert.k
    sizes = np.fromiter((len(st) for coord in cert.sets for st in coord), np.int64, count=m)
    flat = np.fromiter(
        chain.from_iterable(st for coord in cert.sets for st in coord),
        np.int64,
        count=int(sizes.sum()),
    )
    offsets = np.zeros(m + 1, np.int64)
    np.cumsum(sizes, out=offsets[1:])
    coords = np.repeat(np.arange(cert.s, dtype=np.int64), cert.k)
    return code.generator.column_words(), flat, offsets, coords


def main():
    code = construct_pir3(600)
    args = flatten_certificate(code)
    s, n = code.s, code.n

    cases = [
        ("level scan s=5 r=3 k=3", lambda k: k.scan_level(5, 3, 3)),
        ("level scan s=6 r=3 k=3", lambda k: k.scan_level(6, 3, 3)),
        ("census    s=4 r=3 k=3", lambda k: census(k, 4, 3, 3)),
        ("certificate s=600     ", lambda k: k.certificate_ok(*args, s, n)),
    ]

    print(f"{'case':<26} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for label, run in cases:
        sanity_ref, sanity_nb = run(ref), run(nb)
        assert sanity_ref == sanity_nb, (label, sanity_ref, sanity_nb)
        t_ref = best_of(lambda: run(ref))
        t_nb = best_of(lambda: run(nb))
        print(f"{label:<26} {t_ref * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_ref / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
