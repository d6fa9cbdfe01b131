"""Exact linear algebra over GF(2) with bit-packed vectors and matrices.

Vectors live in F_2^n and are stored as Python ints (bit i = coordinate i),
so XOR, componentwise product (AND) and popcounts are single machine-assisted
operations regardless of n.  Matrices keep one int per row and expose packed
uint64 column words on demand for the numerical kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "BitVector",
    "BitMatrix",
    "VectorSet",
    "SystematizedForm",
    "FormatError",
    "RankDeficientError",
    "product",
    "offset_product_sum",
    "pairwise_products",
    "set_square",
    "rank",
    "span_basis",
    "span_contains",
    "span_dimension",
    "systematize",
    "format_matrix",
    "parse_matrix",
]


class FormatError(ValueError):
    """Malformed text input (matrix, code or certificate files)."""


class RankDeficientError(ValueError):
    """Matrix does not have full row rank where an invertible head is required."""


@dataclass(frozen=True, slots=True)
class BitVector:
    """Immutable vector in F_2^n; coordinate i is bit i of ``bits``."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise ValueError(f"vector length must be positive, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits 0x{self.bits:x} do not fit in {self.n} coordinates")

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, 0)

    @classmethod
    def unit(cls, n: int, i: int) -> "BitVector":
        """Standard basis vector with a single one at coordinate i."""
        if not 0 <= i < n:
            raise ValueError(f"coordinate {i} out of range for length {n}")
        return cls(n, 1 << i)

    @classmethod
    def from01(cls, text: str) -> "BitVector":
        if not text or text.strip("01"):
            raise FormatError(f"expected a nonempty 01-string, got {text!r}")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
        return cls(len(text), bits)

    @classmethod
    def from_ints(cls, values: Sequence[int]) -> "BitVector":
        bits = 0
        for i, v in enumerate(values):
            if v not in (0, 1):
                raise ValueError(f"coordinate {i} must be 0 or 1, got {v!r}")
            bits |= v << i
        return cls(len(values), bits)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"coordinate {i} out of range for length {self.n}")
        return (self.bits >> i) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.n))

    def _check_same_length(self, other: "BitVector") -> None:
        if not isinstance(other, BitVector):
            raise TypeError(f"expected BitVector, got {type(other).__name__}")
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} != {other.n}")

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check_same_length(other)
        return BitVector(self.n, self.bits ^ other.bits)

    __add__ = __xor__  # addition and subtraction coincide over GF(2)

    def __mul__(self, other: "BitVector") -> "BitVector":
        """Componentwise product: one exactly where both factors are one."""
        self._check_same_length(other)
        return BitVector(self.n, self.bits & other.bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> tuple[int, ...]:
        """Indices of the nonzero coordinates, ascending."""
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return tuple(out)

    def to01(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def __repr__(self) -> str:
        if self.n <= 64:
            return f"BitVector('{self.to01()}')"
        return f"BitVector(n={self.n}, weight={self.weight()})"


def product(u: BitVector, v: BitVector) -> BitVector:
    """Componentwise product of two vectors of the same length."""
    return u * v


def offset_product_sum(u: BitVector, v1: BitVector, v2: BitVector, v3: BitVector) -> BitVector:
    """Sum of the componentwise products of the three pairwise offsets of u.

    Computes (u+v1)(u+v2) + (u+v2)(u+v3) + (u+v3)(u+v1).  When the products
    v1*v2, v1*v3 and v2*v3 sum to zero this collapses to u itself, which is
    what makes coordinate recovery from disjointly supported offsets work.
    """
    a, b, c = u + v1, u + v2, u + v3
    return a * b + b * c + c * a


class VectorSet:
    """Deduplicating, insertion-ordered collection of equal-length vectors."""

    __slots__ = ("dim", "_order", "_seen")

    def __init__(self, dim: int, vectors: Iterable[BitVector] = ()) -> None:
        if dim <= 0:
            raise ValueError(f"dimension must be positive, got {dim}")
        self.dim = dim
        self._order: list[BitVector] = []
        self._seen: set[int] = set()
        for v in vectors:
            self.add(v)

    def add(self, v: BitVector) -> bool:
        """Insert v; returns True when v was not already present."""
        if v.n != self.dim:
            raise ValueError(f"length mismatch: {v.n} != {self.dim}")
        if v.bits in self._seen:
            return False
        self._seen.add(v.bits)
        self._order.append(v)
        return True

    def vectors(self) -> tuple[BitVector, ...]:
        return tuple(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __iter__(self) -> Iterator[BitVector]:
        return iter(self._order)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, BitVector) and v.n == self.dim and v.bits in self._seen

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorSet):
            return NotImplemented
        return self.dim == other.dim and self._seen == other._seen

    def __repr__(self) -> str:
        return f"VectorSet(dim={self.dim}, size={len(self)})"


def pairwise_products(vectors: Sequence[BitVector], dim: int | None = None) -> VectorSet:
    """Componentwise products over all unordered index pairs of the family.

    The family may repeat values; products are formed per index pair and then
    deduplicated, so the result has at most m(m-1)/2 members for m inputs.
    """
    if dim is None:
        if not vectors:
            raise ValueError("need at least one vector or an explicit dim")
        dim = vectors[0].n
    out = VectorSet(dim)
    m = len(vectors)
    for j in range(m):
        for t in range(j + 1, m):
            out.add(vectors[j] * vectors[t])
    return out


def set_square(x: VectorSet) -> VectorSet:
    """Products u*v over all unordered pairs of distinct members of x."""
    return pairwise_products(x.vectors(), x.dim)


class BitMatrix:
    """Immutable s x n matrix over GF(2); row i is the int ``row_bits[i]``."""

    __slots__ = ("rows", "cols", "row_bits", "_col_bits", "_col_words")

    def __init__(self, rows: int, cols: int, row_bits: Sequence[int]) -> None:
        if rows <= 0:
            raise ValueError(f"row count must be positive, got {rows}")
        if cols < 0:
            raise ValueError(f"column count must be nonnegative, got {cols}")
        bits = tuple(row_bits)
        if len(bits) != rows:
            raise ValueError(f"expected {rows} row values, got {len(bits)}")
        for i, b in enumerate(bits):
            if b < 0 or b >> cols:
                raise ValueError(f"row {i} value 0x{b:x} does not fit in {cols} columns")
        self.rows = rows
        self.cols = cols
        self.row_bits = bits
        self._col_bits: tuple[int, ...] | None = None
        self._col_words: np.ndarray | None = None

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector]) -> "BitMatrix":
        if not rows:
            raise ValueError("matrix needs at least one row")
        n = rows[0].n
        for v in rows:
            if v.n != n:
                raise ValueError(f"ragged rows: {v.n} != {n}")
        return cls(len(rows), n, [v.bits for v in rows])

    @classmethod
    def from_array(cls, arr: np.ndarray | Sequence[Sequence[int]]) -> "BitMatrix":
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {a.shape}")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("matrix entries must be 0 or 1")
        rows, cols = a.shape
        weights = 1 << np.arange(cols, dtype=object)
        bits = [int((a[i].astype(object) * weights).sum()) for i in range(rows)]
        return cls(rows, cols, bits)

    @classmethod
    def identity(cls, s: int) -> "BitMatrix":
        return cls(s, s, [1 << i for i in range(s)])

    def row(self, i: int) -> BitVector:
        if not 0 <= i < self.rows:
            raise IndexError(f"row {i} out of range for {self.rows} rows")
        return BitVector(self.cols, self.row_bits[i])

    def column_bits(self) -> tuple[int, ...]:
        """Column j as an int over row indices (bit i = entry in row i)."""
        if self._col_bits is None:
            cols = [0] * self.cols
            for i, b in enumerate(self.row_bits):
                mask = 1 << i
                while b:
                    low = b & -b
                    cols[low.bit_length() - 1] |= mask
                    b ^= low
            self._col_bits = tuple(cols)
        return self._col_bits

    def column(self, j: int) -> BitVector:
        if not 0 <= j < self.cols:
            raise IndexError(f"column {j} out of range for {self.cols} columns")
        return BitVector(self.rows, self.column_bits()[j])

    def to_array(self) -> np.ndarray:
        """Dense uint8 array of shape (rows, cols)."""
        if self.cols == 0:
            return np.zeros((self.rows, 0), dtype=np.uint8)
        nbytes = (self.cols + 7) // 8
        buf = b"".join(b.to_bytes(nbytes, "little") for b in self.row_bits)
        packed = np.frombuffer(buf, dtype=np.uint8).reshape(self.rows, nbytes)
        return np.unpackbits(packed, axis=1, bitorder="little")[:, : self.cols]

    def column_words(self) -> np.ndarray:
        """Columns packed into uint64 words: shape (cols, ceil(rows/64)).

        Bit i of the word stream for column j is the entry in row i; used by
        the accelerated kernels so XORing whole columns is a few word ops.
        """
        if self._col_words is None:
            nwords = (self.rows + 63) // 64
            out = np.zeros((self.cols, nwords * 8), dtype=np.uint8)
            if self.cols:
                dense = np.ascontiguousarray(self.to_array().T)
                packed = np.packbits(dense, axis=1, bitorder="little")
                out[:, : packed.shape[1]] = packed
            self._col_words = out.view(np.uint64)
        return self._col_words

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if not isinstance(other, BitMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"inner dimensions differ: {self.cols} != {other.rows}")
        out = []
        for b in self.row_bits:
            acc = 0
            bb = b
            while bb:
                low = bb & -bb
                acc ^= other.row_bits[low.bit_length() - 1]
                bb ^= low
            out.append(acc)
        return BitMatrix(self.rows, other.cols, out)

    def permute_columns(self, perm: Sequence[int]) -> "BitMatrix":
        """New matrix whose column j is column perm[j] of this one."""
        if sorted(perm) != list(range(self.cols)):
            raise ValueError("perm must be a permutation of the column indices")
        out = []
        for b in self.row_bits:
            nb = 0
            for j, src in enumerate(perm):
                nb |= ((b >> src) & 1) << j
            out.append(nb)
        return BitMatrix(self.rows, self.cols, out)

    def append_columns(self, new_cols: Sequence[BitVector]) -> "BitMatrix":
        for v in new_cols:
            if v.n != self.rows:
                raise ValueError(f"column length {v.n} != row count {self.rows}")
        bits = list(self.row_bits)
        for t, v in enumerate(new_cols):
            pos = self.cols + t
            vb = v.bits
            while vb:
                low = vb & -vb
                bits[low.bit_length() - 1] |= 1 << pos
                vb ^= low
        return BitMatrix(self.rows, self.cols + len(new_cols), bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.row_bits) == (other.rows, other.cols, other.row_bits)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.row_bits))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def format_matrix(m: BitMatrix) -> str:
    """Text form: one 'rows cols' header line, then one 01-row per line."""
    lines = [f"{m.rows} {m.cols}"]
    lines.extend(m.row(i).to01() if m.cols else "" for i in range(m.rows))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> BitMatrix:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    if not lines:
        raise FormatError("empty matrix text")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"header must be 'rows cols', got {lines[0]!r}")
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FormatError(f"non-integer header {lines[0]!r}") from exc
    if rows <= 0 or cols < 0:
        raise FormatError(f"bad dimensions {rows}x{cols}")
    if len(lines) != rows + 1:
        raise FormatError(f"expected {rows} row lines, got {len(lines) - 1}")
    bits = []
    for i, line in enumerate(lines[1:]):
        if len(line) != cols or line.strip("01"):
            raise FormatError(f"row {i + 1} must be exactly {cols} chars of 0/1, got {line!r}")
        bits.append(BitVector.from01(line).bits if cols else 0)
    return BitMatrix(rows, cols, bits)


class _Gf2Basis:
    """Incremental reduced basis keyed by pivot bit; supports membership tests."""

    __slots__ = ("pivots",)

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    def reduce(self, x: int) -> int:
        while x:
            p = (x & -x).bit_length() - 1
            row = self.pivots.get(p)
            if row is None:
                return x
            x ^= row
        return 0

    def add(self, x: int) -> bool:
        """Insert x into the span; returns True when the dimension grew."""
        x = self.reduce(x)
        if x == 0:
            return False
        self.pivots[(x & -x).bit_length() - 1] = x
        return True

    def __len__(self) -> int:
        return len(self.pivots)


def rank(m: BitMatrix) -> int:
    """Rank over GF(2)."""
    basis = _Gf2Basis()
    for b in m.row_bits:
        basis.add(b)
    return len(basis)


def span_basis(vectors: Iterable[BitVector]) -> _Gf2Basis:
    basis = _Gf2Basis()
    for v in vectors:
        basis.add(v.bits)
    return basis


def span_dimension(x: VectorSet) -> int:
    return len(span_basis(x))


def span_contains(x: VectorSet, target: BitVector) -> bool:
    """True iff target lies in the GF(2) span of the members of x."""
    if target.n != x.dim:
        raise ValueError(f"length mismatch: {target.n} != {x.dim}")
    return span_basis(x).reduce(target.bits) == 0


@dataclass(frozen=True)
class SystematizedForm:
    """Row transform + column permutation putting a generator in [I | P] form.

    ``transform @ source.permute_columns(permutation) == [I_s | P]`` where the
    first s entries of ``permutation`` are the pivot columns of the source.
    """

    transform: BitMatrix
    permutation: tuple[int, ...]
    parity: BitMatrix | None  # None when there are no redundant columns

    @property
    def s(self) -> int:
        return self.transform.rows

    @property
    def redundancy(self) -> int:
        return len(self.permutation) - self.transform.rows

    def parity_column(self, t: int) -> BitVector:
        if self.parity is None:
            raise IndexError("no redundant columns")
        return self.parity.column(t)

    def systematic_matrix(self) -> BitMatrix:
        """The [I_s | P] matrix itself."""
        ident = BitMatrix.identity(self.s)
        if self.parity is None:
            return ident
        return ident.append_columns([self.parity.column(t) for t in range(self.parity.cols)])


def systematize(g: BitMatrix) -> SystematizedForm:
    """Reduce g to [I_s | P] by row operations and a column permutation.

    Raises RankDeficientError when the rows are dependent, reporting the
    actual rank.
    """
    s, n = g.rows, g.cols
    work = list(g.row_bits)
    aug = [1 << i for i in range(s)]  # accumulates the row transform
    pivots: list[int] = []
    prow = 0
    for c in range(n):
        if prow == s:
            break
        hit = next((i for i in range(prow, s) if (work[i] >> c) & 1), None)
        if hit is None:
            continue
        work[prow], work[hit] = work[hit], work[prow]
        aug[prow], aug[hit] = aug[hit], aug[prow]
        for i in range(s):
            if i != prow and (work[i] >> c) & 1:
                work[i] ^= work[prow]
                aug[i] ^= aug[prow]
        pivots.append(c)
        prow += 1
    if prow < s:
        raise RankDeficientError(f"matrix has row rank {prow}, need {s}")
    pivot_set = set(pivots)
    spare = [c for c in range(n) if c not in pivot_set]
    perm = tuple(pivots + spare)
    parity = None
    if spare:
        pbits = []
        for i in range(s):
            b = 0
            for t, c in enumerate(spare):
                b |= ((work[i] >> c) & 1) << t
            pbits.append(b)
        parity = BitMatrix(s, len(spare), pbits)
    return SystematizedForm(BitMatrix(s, s, aug), perm, parity)
