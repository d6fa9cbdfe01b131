"""Vector/matrix algebra over GF(2): ops, spans, systematization, text format."""

import random

import numpy as np
import pytest

from pirkit.gf2 import (
    BitMatrix,
    BitVector,
    FormatError,
    RankDeficientError,
    VectorSet,
    format_matrix,
    offset_product_sum,
    pairwise_products,
    parse_matrix,
    product,
    rank,
    set_square,
    span_contains,
    span_dimension,
    systematize,
)


def test_bitvector_roundtrip_and_views():
    v = BitVector.from01("10110")
    assert v.to01() == "10110"
    assert len(v) == 5
    assert v.weight() == 3
    assert v.support() == (0, 2, 3)
    assert [v[i] for i in range(5)] == [1, 0, 1, 1, 0]
    assert list(v) == [1, 0, 1, 1, 0]
    assert BitVector.from_ints([1, 0, 1, 1, 0]) == v
    assert BitVector.unit(4, 2).to01() == "0010"
    assert BitVector.zeros(3).is_zero()
    assert repr(v) == "BitVector('10110')"


def test_bitvector_validation():
    with pytest.raises(ValueError):
        BitVector(0, 0)
    with pytest.raises(ValueError):
        BitVector(3, 8)  # bit 3 set but only 3 coordinates
    with pytest.raises(ValueError):
        BitVector(3, -1)
    with pytest.raises(FormatError):
        BitVector.from01("01x")
    with pytest.raises(FormatError):
        BitVector.from01("")
    with pytest.raises(ValueError):
        BitVector.unit(3, 3)
    with pytest.raises(ValueError):
        BitVector.from_ints([0, 2])
    with pytest.raises(IndexError):
        BitVector.zeros(3)[3]


def test_vector_ops_examples():
    u = BitVector.from01("1100")
    v = BitVector.from01("0110")
    assert (u + v).to01() == "1010"
    assert (u ^ v) == (u + v)
    assert product(u, v).to01() == "0100"
    assert (u * v) == product(u, v)
    with pytest.raises(ValueError):
        u + BitVector.from01("110")
    with pytest.raises(ValueError):
        u * BitVector.from01("11000")
    with pytest.raises(TypeError):
        u * 3


def test_vector_ops_random_against_coordinate_oracle():
    rng = random.Random(0xA11CE)
    for _ in range(1000):
        n = rng.randint(1, 64)
        a = [rng.randint(0, 1) for _ in range(n)]
        b = [rng.randint(0, 1) for _ in range(n)]
        u, v = BitVector.from_ints(a), BitVector.from_ints(b)
        assert list(u + v) == [(x + y) % 2 for x, y in zip(a, b)]
        assert list(u * v) == [x & y for x, y in zip(a, b)]
        assert (u + v).weight() == sum((x + y) % 2 for x, y in zip(a, b))


def test_offset_product_sum_collapses_on_disjoint_offsets():
    rng = random.Random(0xD15C0)
    for _ in range(500):
        n = rng.randint(1, 64)
        u = BitVector(n, rng.getrandbits(n))
        # partition coordinates among the three offsets (or none)
        masks = [0, 0, 0]
        for i in range(n):
            slot = rng.randrange(4)
            if slot < 3:
                masks[slot] |= 1 << i
        v1, v2, v3 = (BitVector(n, m) for m in masks)
        assert (v1 * v2).is_zero() and (v1 * v3).is_zero() and (v2 * v3).is_zero()
        assert offset_product_sum(u, v1, v2, v3) == u


def test_offset_product_sum_needs_disjointness():
    one = BitVector.from01("1")
    zero = BitVector.from01("0")
    # all three offsets overlap: (0+1)(0+1) three times = 1 != 0
    assert offset_product_sum(zero, one, one, one) == one


def test_vectorset_dedups_and_keeps_order():
    a = BitVector.from01("10")
    b = BitVector.from01("01")
    x = VectorSet(2, [a, b, a])
    assert len(x) == 2
    assert x.vectors() == (a, b)
    assert a in x and BitVector.from01("11") not in x
    assert x == VectorSet(2, [b, a])  # order-insensitive equality
    assert not x.add(a)
    assert x.add(BitVector.from01("11"))
    with pytest.raises(ValueError):
        x.add(BitVector.from01("111"))
    with pytest.raises(ValueError):
        VectorSet(0)


def test_pairwise_products_uses_index_pairs():
    a = BitVector.from01("1")
    b = BitVector.from01("0")
    # repeated values still multiply: the pair (a, a) contributes a*a = a
    sq = pairwise_products([a, a])
    assert sq.vectors() == (a,)
    # distinct-member square of the same family is empty after dedup
    assert len(set_square(VectorSet(1, [a, a]))) == 0
    assert set_square(VectorSet(1, [a, b])).vectors() == (b,)  # a*b = 0-vector
    with pytest.raises(ValueError):
        pairwise_products([])


def test_set_square_size_bound_small():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 16)
        x = VectorSet(n, [BitVector(n, rng.getrandbits(n)) for _ in range(rng.randint(1, 8))])
        m = len(x)
        assert len(set_square(x)) <= m * (m - 1) // 2


def test_bitmatrix_construction_and_views():
    g = BitMatrix.from_rows([BitVector.from01("101"), BitVector.from01("011")])
    assert (g.rows, g.cols) == (2, 3)
    assert g.row(0).to01() == "101"
    assert g.column(0).to01() == "10"
    assert g.column(2).to01() == "11"
    assert g.column_bits() == (1, 2, 3)
    assert np.array_equal(g.to_array(), [[1, 0, 1], [0, 1, 1]])
    assert BitMatrix.from_array([[1, 0, 1], [0, 1, 1]]) == g
    assert BitMatrix.identity(2) == BitMatrix(2, 2, [1, 2])
    with pytest.raises(ValueError):
        BitMatrix(2, 2, [1])
    with pytest.raises(ValueError):
        BitMatrix(2, 2, [4, 0])
    with pytest.raises(ValueError):
        BitMatrix.from_rows([])
    with pytest.raises(ValueError):
        BitMatrix.from_rows([BitVector.from01("1"), BitVector.from01("11")])
    with pytest.raises(IndexError):
        g.row(2)
    with pytest.raises(IndexError):
        g.column(3)


def test_bitmatrix_matmul_and_permutation():
    g = BitMatrix.from_rows([BitVector.from01("101"), BitVector.from01("011")])
    assert BitMatrix.identity(2) @ g == g
    # row-swap transform
    swap = BitMatrix(2, 2, [2, 1])
    assert (swap @ g).row(0).to01() == "011"
    perm = (2, 0, 1)
    gp = g.permute_columns(perm)
    for j, src in enumerate(perm):
        assert gp.column(j) == g.column(src)
    with pytest.raises(ValueError):
        g.permute_columns((0, 0, 1))
    with pytest.raises(ValueError):
        swap @ BitMatrix.identity(3)


def test_bitmatrix_append_columns():
    g = BitMatrix.identity(2)
    g2 = g.append_columns([BitVector.from01("11"), BitVector.from01("10")])
    assert g2.cols == 4
    assert g2.column(2).to01() == "11"
    assert g2.column(3).to01() == "10"
    with pytest.raises(ValueError):
        g.append_columns([BitVector.from01("111")])


def test_column_words_pack_against_dense_oracle():
    rng = random.Random(0xBEEF)
    for _ in range(50):
        s = rng.randint(1, 70)  # crosses the one-word boundary
        n = rng.randint(1, 10)
        g = BitMatrix(s, n, [rng.getrandbits(n) for _ in range(s)])
        words = g.column_words()
        assert words.shape == (n, (s + 63) // 64)
        dense = g.to_array()
        for j in range(n):
            val = int.from_bytes(words[j].tobytes(), "little")
            want = sum(int(dense[i, j]) << i for i in range(s))
            assert val == want


def test_rank_by_construction():
    rng = random.Random(0x5EED)
    for _ in range(100):
        s, n = rng.randint(1, 8), rng.randint(8, 14)
        target = rng.randint(1, s)
        # triangular seeds guarantee independence; every row mixes them
        seeds = [(1 << i) | (rng.getrandbits(n - i - 1) << (i + 1)) for i in range(target)]
        bits = list(seeds)
        while len(bits) < s:
            combo = 0
            for sd in seeds:
                if rng.getrandbits(1):
                    combo ^= sd
            bits.append(combo)
        rng.shuffle(bits)
        assert rank(BitMatrix(s, n, bits)) == target
    assert rank(BitMatrix.identity(5)) == 5
    assert rank(BitMatrix(2, 2, [0, 0])) == 0


def test_span_membership_and_dimension():
    x = VectorSet(3, [BitVector.from01("110"), BitVector.from01("011")])
    assert span_contains(x, BitVector.from01("101"))
    assert span_contains(x, BitVector.from01("000"))
    assert not span_contains(x, BitVector.from01("100"))
    assert span_dimension(x) == 2
    with pytest.raises(ValueError):
        span_contains(x, BitVector.from01("11"))


def test_span_dimension_matches_rank():
    rng = random.Random(31337)
    for _ in range(100):
        n = rng.randint(1, 20)
        vecs = [BitVector(n, rng.getrandbits(n)) for _ in range(rng.randint(1, 8))]
        x = VectorSet(n, vecs)
        assert span_dimension(x) == rank(BitMatrix(len(vecs), n, [v.bits for v in vecs]))


def test_systematize_identity_passthrough():
    g = BitMatrix.identity(4)
    sf = systematize(g)
    assert sf.permutation == (0, 1, 2, 3)
    assert sf.transform == BitMatrix.identity(4)
    assert sf.parity is None
    assert sf.redundancy == 0
    assert sf.systematic_matrix() == g


def test_systematize_factorization_random():
    rng = random.Random(0xFACADE)
    done = 0
    while done < 200:
        s = rng.randint(1, 6)
        n = rng.randint(s, 12)
        g = BitMatrix(s, n, [rng.getrandbits(n) for _ in range(s)])
        if rank(g) < s:
            continue
        sf = systematize(g)
        assert sf.transform @ g.permute_columns(sf.permutation) == sf.systematic_matrix()
        assert sf.redundancy == n - s
        assert sorted(sf.permutation) == list(range(n))
        if sf.parity is not None:
            assert sf.parity.cols == n - s
        done += 1


def test_systematize_reports_deficient_rank():
    g = BitMatrix(3, 4, [0b1010, 0b0101, 0b1111])  # row3 = row1 + row2
    with pytest.raises(RankDeficientError, match="rank 2"):
        systematize(g)


def test_matrix_text_roundtrip_and_golden():
    g = BitMatrix.from_rows([BitVector.from01("100110"), BitVector.from01("010101")])
    text = format_matrix(g)
    assert text == "2 6\n100110\n010101\n"
    assert parse_matrix(text) == g


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "junk\n",
        "2\n10\n01\n",
        "2 2\n10\n",  # missing row
        "2 2\n10\n01\n11\n",  # extra row
        "2 2\n1x\n01\n",
        "2 2\n101\n010\n",  # wrong width
        "0 2\n",
        "2 -1\n\n\n",
        "a b\n10\n01\n",
        "2 2\n10 \n01\n",  # trailing space
    ],
)
def test_parse_matrix_rejects(bad):
    with pytest.raises(FormatError):
        parse_matrix(bad)
