"""Coded-storage private retrieval, emulated in one process.

The database is s parts of L bits.  Each of n servers stores one coded part
(an XOR of database parts given by its generator column).  A retrieval of
global bit index g = i*L + o picks the k disjoint recovery sets for part i,
hands every server of set j the j-th additive share of the classic k-server
query for offset o, and hands every remaining server an independent uniform
dummy query.  Each server answers one bit: the inner product of its query
with its coded part.  XORing the answers over each recovery set recombines
to the wanted bit, while every single server sees a uniform query whatever
(i, o) is — storage n/s instead of the k copies plain replication needs.

Sessions are deterministic: the seed is consumed directly as the randomness
bit pool (low bits first), so equal seeds replay byte-identical transcripts
and enumerating seeds enumerates query patterns exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .codes import PirCode, verify_pk
from .gf2 import BitVector

__all__ = [
    "Database",
    "CodedStorage",
    "ServerRecord",
    "SessionTranscript",
    "OverheadReport",
    "encode_database",
    "make_queries",
    "run_session",
    "overhead_report",
]


@dataclass(frozen=True)
class Database:
    """s parts of part_len bits each; global bit g lives in part g // part_len."""

    parts: tuple[BitVector, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("database needs at least one part")
        L = self.parts[0].n
        for p in self.parts:
            if p.n != L:
                raise ValueError(f"ragged parts: {p.n} != {L}")

    @property
    def s(self) -> int:
        return len(self.parts)

    @property
    def part_len(self) -> int:
        return self.parts[0].n

    @property
    def total_bits(self) -> int:
        return self.s * self.part_len

    @classmethod
    def from_int(cls, s: int, part_len: int, value: int) -> "Database":
        """Split an s*part_len-bit value into parts, part 0 from the low bits."""
        if value < 0 or value >> (s * part_len):
            raise ValueError(f"value needs more than {s * part_len} bits")
        mask = (1 << part_len) - 1
        return cls(tuple(
            BitVector(part_len, (value >> (i * part_len)) & mask) for i in range(s)
        ))

    @classmethod
    def random(cls, s: int, part_len: int, rng: random.Random) -> "Database":
        return cls(tuple(
            BitVector(part_len, rng.getrandbits(part_len)) for _ in range(s)
        ))

    def bit(self, g: int) -> int:
        if not 0 <= g < self.total_bits:
            raise ValueError(f"bit index {g} out of range for {self.total_bits} bits")
        return self.parts[g // self.part_len][g % self.part_len]


@dataclass(frozen=True)
class CodedStorage:
    """One coded part per server, all of equal length."""

    coded: tuple[BitVector, ...]

    def __post_init__(self) -> None:
        if not self.coded:
            raise ValueError("storage needs at least one coded part")
        L = self.coded[0].n
        for p in self.coded:
            if p.n != L:
                raise ValueError(f"ragged coded parts: {p.n} != {L}")

    @property
    def n(self) -> int:
        return len(self.coded)

    @property
    def part_len(self) -> int:
        return self.coded[0].n

    @property
    def stored_bits(self) -> int:
        return self.n * self.part_len


def encode_database(db: Database, code: PirCode) -> CodedStorage:
    """Coded part j = XOR of the database parts in generator column j."""
    if db.s != code.s:
        raise ValueError(f"database has {db.s} parts, code expects {code.s}")
    L = db.part_len
    out = []
    for colbits in code.generator.column_bits():
        acc = 0
        b = colbits
        while b:
            low = b & -b
            acc ^= db.parts[low.bit_length() - 1].bits
            b ^= low
        out.append(BitVector(L, acc))
    return CodedStorage(tuple(out))


class _BitPool:
    """Deterministic randomness tape: an int consumed low bits first.

    Bits beyond the seed's width read as zero, so a seed of b bits is exactly
    the tape 0^inf || seed — enumerating seeds 0..2^b-1 enumerates every
    pattern of the first b consumed bits once.
    """

    __slots__ = ("bits",)

    def __init__(self, seed: int) -> None:
        if seed < 0:
            raise ValueError(f"seed must be nonnegative, got {seed}")
        self.bits = seed

    def take(self, count: int) -> int:
        val = self.bits & ((1 << count) - 1)
        self.bits >>= count
        return val


def make_queries(part_len: int, offset: int, k: int, randomness: int) -> list[BitVector]:
    """Additive k-sharing of the unit query for offset.

    The first k-1 shares are read straight off the randomness pool (share j
    from bit window j*part_len, low bits first); the last share closes the
    sum so that all k XOR to the unit vector at offset.  Each share in
    isolation is uniform when the pool bits are.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if not 0 <= offset < part_len:
        raise ValueError(f"offset {offset} out of range for part length {part_len}")
    pool = _BitPool(randomness)
    shares = [BitVector(part_len, pool.take(part_len)) for _ in range(k - 1)]
    last = BitVector.unit(part_len, offset)
    for q in shares:
        last += q
    shares.append(last)
    return shares


@dataclass(frozen=True)
class ServerRecord:
    """One server's view: its query and answer, plus the role it played."""

    server: int
    role: int | None  # recovery-set number (0-based) or None for a dummy
    query: BitVector
    answer: int


@dataclass(frozen=True)
class SessionTranscript:
    s: int
    part_len: int
    n: int
    k: int
    index: int
    seed: int
    records: tuple[ServerRecord, ...]
    result: int
    expected: int

    def ok(self) -> bool:
        return self.result == self.expected

    def dump(self) -> str:
        """Stable text form; equal seeds and inputs give identical dumps."""
        lines = [
            f"session s={self.s} L={self.part_len} n={self.n} "
            f"k={self.k} index={self.index} seed={self.seed}"
        ]
        for rec in self.records:
            role = "dummy" if rec.role is None else str(rec.role + 1)
            lines.append(
                f"{rec.server} role={role} query={rec.query.to01()} answer={rec.answer}"
            )
        lines.append(f"result={self.result} expected={self.expected}")
        return "\n".join(lines) + "\n"


def _certificate_for(code: PirCode):
    cert = code.certificate
    if cert is None:
        cert = verify_pk(code.generator, code.k)
        if cert is None:
            raise ValueError("code does not have the k-recovery property")
    return cert


def run_session(db: Database, storage: CodedStorage, code: PirCode,
                index: int, seed: int) -> SessionTranscript:
    """One full retrieval of global bit index, deterministic in seed.

    Consumes (k-1)*L pool bits for the shares, then L per dummy server in
    ascending server order.
    """
    if db.s != code.s:
        raise ValueError(f"database has {db.s} parts, code expects {code.s}")
    if storage.n != code.n:
        raise ValueError(f"storage has {storage.n} parts, code expects {code.n}")
    if storage.part_len != db.part_len:
        raise ValueError(
            f"storage part length {storage.part_len} != database {db.part_len}"
        )
    L = db.part_len
    if not 0 <= index < db.total_bits:
        raise ValueError(f"index {index} out of range for {db.total_bits} bits")
    cert = _certificate_for(code)
    part, offset = divmod(index, L)
    groups = cert.sets[part]
    pool = _BitPool(seed)
    shares = make_queries(L, offset, code.k, pool.take((code.k - 1) * L))
    role_of: dict[int, int] = {}
    for j, group in enumerate(groups):
        for server in group:
            role_of[server] = j
    records = []
    for server in range(code.n):
        j = role_of.get(server)
        query = shares[j] if j is not None else BitVector(L, pool.take(L))
        answer = (query.bits & storage.coded[server].bits).bit_count() & 1
        records.append(ServerRecord(server, j, query, answer))
    result = 0
    for rec in records:
        if rec.role is not None:
            result ^= rec.answer
    return SessionTranscript(
        s=db.s, part_len=L, n=code.n, k=code.k, index=index, seed=seed,
        records=tuple(records), result=result, expected=db.bit(index),
    )


@dataclass(frozen=True)
class OverheadReport:
    """Storage accounting for a code at a given part length."""

    s: int
    n: int
    k: int
    part_len: int

    @property
    def database_bits(self) -> int:
        return self.s * self.part_len

    @property
    def stored_bits(self) -> int:
        return self.n * self.part_len

    @property
    def overhead(self) -> Fraction:
        return Fraction(self.n, self.s)

    @property
    def replication_bits(self) -> int:
        return self.k * self.s * self.part_len

    def summary(self) -> str:
        ov = self.overhead
        ov_text = str(ov.numerator) if ov.denominator == 1 else f"{ov.numerator}/{ov.denominator}"
        lines = [
            f"database: {self.s} parts x {self.part_len} bits = {self.database_bits} bits",
            f"coded storage: {self.n} parts x {self.part_len} bits = {self.stored_bits} bits",
            f"storage overhead: {self.n}/{self.s} = {ov_text}",
            f"plain {self.k}-server replication would store {self.replication_bits} bits "
            f"(overhead {self.k})",
        ]
        return "\n".join(lines) + "\n"


def overhead_report(code: PirCode, part_len: int) -> OverheadReport:
    if part_len < 1:
        raise ValueError(f"part length must be at least 1, got {part_len}")
    return OverheadReport(s=code.s, n=code.n, k=code.k, part_len=part_len)
