"""The JIT kernels must agree with the reference kernels bit for bit."""

import random
from itertools import chain

import numpy as np
import pytest

from pirkit import _kernels_numpy as ref
from pirkit.codes import construct_pir3, verify_pk
from pirkit.gf2 import BitMatrix, rank

nb = pytest.importorskip("pirkit._kernels_numba")


def test_backend_names():
    assert ref.NAME == "numpy"
    assert nb.NAME == "numba"


def test_systematic_pk_agreement_random():
    rng = random.Random(0xACE)
    for _ in range(500):
        s = rng.randint(1, 5)
        r = rng.randint(0, 4)
        k = rng.randint(1, 4)
        cols = tuple(rng.getrandbits(s) for _ in range(r))
        assert ref.systematic_pk(s, k, cols) == nb.systematic_pk(s, k, cols), (s, r, k, cols)


def test_scan_level_identical_witnesses():
    for s in range(1, 5):
        for k in range(1, 5):
            for r in range(0, 4):
                assert ref.scan_level(s, r, k) == nb.scan_level(s, r, k), (s, r, k)


def test_scan_level_known_answers():
    # single overall parity column settles k=2 at r=1
    assert nb.scan_level(3, 1, 2) == (0b111,)
    assert nb.scan_level(3, 1, 2) == ref.scan_level(3, 1, 2)
    # no r=2 block can give three disjoint sets for s=2
    assert nb.scan_level(2, 2, 3) is None and ref.scan_level(2, 2, 3) is None


def _flatten(g, cert):
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
    return g.column_words(), flat, offsets, coords


def test_certificate_kernel_agreement_random():
    rng = random.Random(0xCE57)
    done = 0
    while done < 40:
        s = rng.randint(1, 4)
        n = rng.randint(s, s + 4)
        g = BitMatrix(s, n, [rng.getrandbits(n) for _ in range(s)])
        if rank(g) < s:
            continue
        cert = verify_pk(g, 2)
        if cert is None:
            continue
        args = _flatten(g, cert)
        assert ref.certificate_ok(*args, s, n)
        assert nb.certificate_ok(*args, s, n)
        # tamper: point one entry at a different column
        flat_bad = args[1].copy()
        flat_bad[0] = (flat_bad[0] + 1) % n
        bad = (args[0], flat_bad, args[2], args[3])
        assert ref.certificate_ok(*bad, s, n) == nb.certificate_ok(*bad, s, n) is False
        done += 1


def test_certificate_kernel_multiword_rows():
    # more than 64 coordinates forces multi-word column packing
    code = construct_pir3(80)
    g = code.generator
    args = _flatten(g, code.certificate)
    assert ref.certificate_ok(*args, g.rows, g.cols)
    assert nb.certificate_ok(*args, g.rows, g.cols)
    flat_bad = args[1].copy()
    flat_bad[-1] = (flat_bad[-1] + 1) % g.cols
    bad = (args[0], flat_bad, args[2], args[3])
    assert not ref.certificate_ok(*bad, g.rows, g.cols)
    assert not nb.certificate_ok(*bad, g.rows, g.cols)


def test_certificate_kernel_rejects_empty_set():
    g = BitMatrix(1, 1, [1])
    words = g.column_words()
    flat = np.zeros(0, np.int64)
    offsets = np.zeros(2, np.int64)
    coords = np.zeros(1, np.int64)
    assert not ref.certificate_ok(words, flat, offsets, coords, 1, 1)
    assert not nb.certificate_ok(words, flat, offsets, coords, 1, 1)


def test_wide_inputs_fall_through_to_reference():
    # masks wider than the JIT limit delegate transparently
    assert nb.systematic_pk(40, 1, ()) is True
    assert nb.scan_level(40, 0, 1) == ()
    assert nb.scan_level(34, 0, 2) is None
