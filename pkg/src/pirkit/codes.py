"""k-server recovery codes over GF(2).

A binary generator G (s rows, n columns, full row rank) has the k-recovery
property when every coordinate i admits k pairwise-disjoint column sets each
XORing to unit vector e_i.  k servers each storing one coded part then allow
private retrieval with overall storage n/s instead of the k-fold replication
a k-server scheme classically needs.

This module decides the property exactly (with certificates), builds
redundancy-optimal codes for k in {2, 3, 4}, evaluates the closed-form
minimum redundancy, and searches for it by brute force.
"""

from __future__ import annotations

import logging
import math
import os
import re
from dataclasses import dataclass
from itertools import chain, combinations, product

import numpy as np

from ._backend import get_kernels
from .gf2 import (
    BitMatrix,
    BitVector,
    FormatError,
    format_matrix,
    parse_matrix,
    systematize,
)

__all__ = [
    "SearchGuardError",
    "RecoveryCertificate",
    "PirCode",
    "enumerate_recovery_sets",
    "find_disjoint_recovery_sets",
    "verify_pk",
    "check_certificate",
    "construct_pir2",
    "construct_pir3",
    "construct_pir4",
    "rho",
    "lower_bound_ok",
    "min_redundancy_search",
    "min_redundancy_code",
    "count_systematic_pk",
    "format_certificate",
    "parse_certificate",
    "format_code",
    "parse_code",
    "parse_generator_text",
]

log = logging.getLogger(__name__)

DEFAULT_ENUM_GUARD = 20  # cap on redundancy r: every check walks 2^r solutions
DEFAULT_CELLS_GUARD = 24  # cap on s*r per brute-force level: 2^(s*r) matrices


class SearchGuardError(RuntimeError):
    """An exact search would exceed its configured size guard."""


def _enum_guard() -> int:
    raw = os.environ.get("PIRKIT_SEARCH_GUARD")
    if raw is None:
        return DEFAULT_ENUM_GUARD
    try:
        val = int(raw)
    except ValueError as exc:
        raise ValueError(f"PIRKIT_SEARCH_GUARD must be an integer, got {raw!r}") from exc
    if val < 0:
        raise ValueError(f"PIRKIT_SEARCH_GUARD must be nonnegative, got {val}")
    return val


def _check_enum_guard(r: int) -> None:
    guard = _enum_guard()
    if r > guard:
        raise SearchGuardError(
            f"redundancy {r} exceeds the enumeration guard {guard} "
            f"(each coordinate check walks 2^r solutions); "
            f"set PIRKIT_SEARCH_GUARD to raise the guard"
        )


@dataclass(frozen=True)
class RecoveryCertificate:
    """k disjoint recovery sets per coordinate, as 0-based column index tuples.

    sets[i] holds the k sets for coordinate i, each a sorted index tuple.
    """

    k: int
    sets: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if not self.sets:
            raise ValueError("certificate needs at least one coordinate")
        for i, coord in enumerate(self.sets):
            if len(coord) != self.k:
                raise ValueError(
                    f"coordinate {i} has {len(coord)} sets, expected {self.k}"
                )

    @property
    def s(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class PirCode:
    """Generator matrix plus claimed recovery parameter and certificate."""

    generator: BitMatrix
    k: int
    certificate: RecoveryCertificate | None = None

    @property
    def s(self) -> int:
        return self.generator.rows

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def redundancy(self) -> int:
        return self.generator.cols - self.generator.rows

    def validate(self) -> None:
        """Raise unless the attached certificate proves the k-recovery claim."""
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if self.certificate is None:
            raise ValueError("code carries no certificate")
        if not check_certificate(self.generator, self.certificate, self.k):
            raise ValueError("certificate does not verify against the generator")


@dataclass(frozen=True)
class _RecoverySystem:
    """Shared solution-space data: G column-permuted so pivots lead.

    Solutions of G z = e_i correspond to masks head ^ (kernel subset) where
    head is column i of the systematizing row transform.
    """

    s: int
    r: int
    perm: tuple[int, ...]
    head_cols: tuple[int, ...]
    kernel_masks: tuple[int, ...]

    def solution_masks(self, i: int) -> list[int]:
        """All 2^r solutions for coordinate i, as masks over permuted positions."""
        cur = self.head_cols[i]
        out = [cur]
        for idx in range(1, 1 << self.r):
            cur ^= self.kernel_masks[(idx & -idx).bit_length() - 1]
            out.append(cur)
        return out

    def mask_to_set(self, mask: int) -> frozenset[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.perm[low.bit_length() - 1])
            mask ^= low
        return frozenset(out)


def _recovery_system(g: BitMatrix) -> _RecoverySystem:
    sf = systematize(g)  # raises RankDeficientError on dependent rows
    s = sf.s
    r = sf.redundancy
    pcols = sf.parity.column_bits() if sf.parity is not None else ()
    kernel = tuple(pcols[t] | (1 << (s + t)) for t in range(r))
    return _RecoverySystem(s, r, sf.permutation, sf.transform.column_bits(), kernel)


def _check_coordinate(g: BitMatrix, i: int) -> None:
    if not 0 <= i < g.rows:
        raise ValueError(f"coordinate {i} out of range for {g.rows} rows")


def enumerate_recovery_sets(g: BitMatrix, i: int) -> list[frozenset[int]]:
    """Every column set of g XORing to unit vector e_i (0-based), no omissions.

    There are exactly 2^(n-s) of them for a full-row-rank generator.
    """
    _check_coordinate(g, i)
    _check_enum_guard(g.cols - g.rows)
    sys = _recovery_system(g)
    return [sys.mask_to_set(m) for m in sys.solution_masks(i)]


def _pack_masks(masks: list[int], k: int) -> list[int] | None:
    """First k pairwise-disjoint masks in depth-first order, or None.

    masks must be sorted smallest-first; failed (union, need) states memoize
    the lowest start index that already failed, which prunes permutation
    revisits.
    """
    m = len(masks)
    failed: dict[tuple[int, int], int] = {}

    def dfs(union: int, start: int, need: int) -> list[int] | None:
        if need == 0:
            return []
        key = (union, need)
        bad = failed.get(key)
        if bad is not None and bad <= start:
            return None
        for j in range(start, m - need + 1):
            sm = masks[j]
            if union & sm == 0:
                rest = dfs(union | sm, j + 1, need - 1)
                if rest is not None:
                    rest.append(sm)
                    return rest
        prev = failed.get(key)
        if prev is None or start < prev:
            failed[key] = start
        return None

    got = dfs(0, 0, k)
    if got is None:
        return None
    got.reverse()
    return got


def _sorted_solution_masks(sys: _RecoverySystem, i: int) -> list[int]:
    masks = sys.solution_masks(i)
    masks.sort(key=lambda m: (m.bit_count(), m))
    return masks


def find_disjoint_recovery_sets(g: BitMatrix, i: int, k: int) -> list[frozenset[int]] | None:
    """k pairwise-disjoint recovery sets for coordinate i, or None if impossible.

    Exact: searches the full solution space, trying small sets first.
    """
    _check_coordinate(g, i)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    _check_enum_guard(g.cols - g.rows)
    sys = _recovery_system(g)
    got = _pack_masks(_sorted_solution_masks(sys, i), k)
    if got is None:
        return None
    return [sys.mask_to_set(m) for m in got]


def verify_pk(g: BitMatrix, k: int) -> RecoveryCertificate | None:
    """Decide the k-recovery property; a certificate on success, None on failure."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    _check_enum_guard(g.cols - g.rows)
    sys = _recovery_system(g)
    coords = []
    for i in range(g.rows):
        got = _pack_masks(_sorted_solution_masks(sys, i), k)
        if got is None:
            log.debug("coordinate %d admits no %d disjoint recovery sets", i, k)
            return None
        coords.append(tuple(tuple(sorted(sys.mask_to_set(m))) for m in got))
    return RecoveryCertificate(k, tuple(coords))


def check_certificate(g: BitMatrix, cert: RecoveryCertificate, k: int) -> bool:
    """True iff cert proves the k-recovery property for g.

    Checks shape (one group of exactly k sets per coordinate), index ranges,
    per-coordinate pairwise disjointness, and that every set XORs to its unit
    vector.  Never raises on a bad certificate; the reason is logged.
    """
    if cert.k != k:
        log.debug("certificate is for k=%d, asked about k=%d", cert.k, k)
        return False
    if cert.s != g.rows:
        log.debug("certificate covers %d coordinates, generator has %d", cert.s, g.rows)
        return False
    m = cert.s * k
    sizes = np.fromiter(
        (len(st) for coord in cert.sets for st in coord), np.int64, count=m
    )
    total = int(sizes.sum())
    flat = np.fromiter(
        chain.from_iterable(st for coord in cert.sets for st in coord),
        np.int64,
        count=total,
    )
    if total and (flat.min() < 0 or flat.max() >= g.cols):
        log.debug("certificate references columns outside 0..%d", g.cols - 1)
        return False
    offsets = np.zeros(m + 1, np.int64)
    np.cumsum(sizes, out=offsets[1:])
    coords = np.repeat(np.arange(cert.s, dtype=np.int64), k)
    ok = get_kernels().certificate_ok(g.column_words(), flat, offsets, coords, g.rows, g.cols)
    if not ok:
        log.debug("certificate failed the XOR/disjointness kernel check")
    return bool(ok)


# ---------------------------------------------------------------------------
# constructions and redundancy formulas


def rho(s: int, k: int) -> int:
    """Minimum redundancy of an s-coordinate code with the k-recovery property.

    Exact for k in {2, 3, 4}.  The 3-server value is the least r with
    r(r-1) >= 2s, i.e. ceil(sqrt(2s + 1/4) + 1/2); the 4-server value
    exceeds it by one, and a single overall parity column settles k=2.
    """
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    if k == 2:
        return 1
    if k == 3:
        return _rho3(s)
    if k == 4:
        return _rho3(s) + 1
    raise ValueError(f"minimum redundancy is implemented for k in (2, 3, 4), got k={k}")


def _rho3(s: int) -> int:
    r = max(2, math.ceil(math.sqrt(2 * s + 0.25) + 0.5))
    # float seed, then exact integer adjustment in both directions
    while r > 2 and (r - 1) * (r - 2) >= 2 * s:
        r -= 1
    while r * (r - 1) < 2 * s:
        r += 1
    return r


def lower_bound_ok(s: int, r: int) -> bool:
    """Whether redundancy r satisfies the 3-server counting bound r(r-1) >= 2s."""
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    return r * (r - 1) >= 2 * s


def _pair_assignment(s: int, r: int) -> list[tuple[int, int]]:
    """First s unordered pairs from r parity positions, lexicographic."""
    pairs = []
    for a, b in combinations(range(r), 2):
        pairs.append((a, b))
        if len(pairs) == s:
            return pairs
    raise ValueError(f"{r} parity positions offer only {len(pairs)} pairs, need {s}")


def _rows_using(pairs: list[tuple[int, int]], r: int) -> list[list[int]]:
    rows: list[list[int]] = [[] for _ in range(r)]
    for j, (a, b) in enumerate(pairs):
        rows[a].append(j)
        rows[b].append(j)
    return rows


def _systematic_code(s: int, r: int, parity_rows: list[int], k: int,
                     cert: RecoveryCertificate) -> PirCode:
    bits = [(1 << i) | (parity_rows[i] << s) for i in range(s)]
    g = BitMatrix(s, s + r, bits)
    code = PirCode(g, k, cert)
    code.validate()
    return code


def construct_pir2(s: int) -> PirCode:
    """[I_s | all-ones]: every coordinate is recoverable from itself or from
    the parity column plus the remaining coordinates.  Redundancy 1.
    """
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    coords = []
    for i in range(s):
        others = tuple(sorted({s} | {j for j in range(s) if j != i}))
        coords.append(((i,), others))
    cert = RecoveryCertificate(2, tuple(coords))
    return _systematic_code(s, 1, [1] * s, 2, cert)


def construct_pir3(s: int) -> PirCode:
    """Redundancy-optimal 3-recovery code: each coordinate is marked by a
    distinct pair of parity columns.

    With r = rho(s, 3) parity columns there are r(r-1)/2 >= s pairs; row i of
    the parity block carries ones exactly at its pair (a_i, b_i).  The three
    disjoint sets for i: the coordinate itself; parity a_i with the other
    coordinates it covers; parity b_i likewise.
    """
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    r = _rho3(s)
    pairs = _pair_assignment(s, r)
    rows = _rows_using(pairs, r)
    parity_rows = [(1 << a) | (1 << b) for a, b in pairs]
    coords = []
    for i, (a, b) in enumerate(pairs):
        via_a = tuple(sorted([s + a] + [j for j in rows[a] if j != i]))
        via_b = tuple(sorted([s + b] + [j for j in rows[b] if j != i]))
        coords.append(((i,), via_a, via_b))
    cert = RecoveryCertificate(3, tuple(coords))
    return _systematic_code(s, r, parity_rows, 3, cert)


def construct_pir4(s: int) -> PirCode:
    """Optimal 4-recovery code: the pair construction plus one overall parity.

    The fourth disjoint set for coordinate i combines the all-ones column,
    the parity columns outside i's pair, and the coordinates whose pairs
    avoid i's pair entirely; everything else cancels.
    """
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    r3 = _rho3(s)
    pairs = _pair_assignment(s, r3)
    rows = _rows_using(pairs, r3)
    ones = (1 << r3) - 1
    parity_rows = [(1 << a) | (1 << b) | (1 << r3) for a, b in pairs]
    coords = []
    for i, (a, b) in enumerate(pairs):
        via_a = tuple(sorted([s + a] + [j for j in rows[a] if j != i]))
        via_b = tuple(sorted([s + b] + [j for j in rows[b] if j != i]))
        spare_parity = [s + c for c in range(r3) if c != a and c != b]
        untouched = [
            j for j, (x, y) in enumerate(pairs)
            if j != i and x != a and x != b and y != a and y != b
        ]
        via_rest = tuple(sorted([s + r3] + spare_parity + untouched))
        coords.append(((i,), via_a, via_b, via_rest))
    cert = RecoveryCertificate(4, tuple(coords))
    return _systematic_code(s, r3 + 1, parity_rows, 4, cert)


# ---------------------------------------------------------------------------
# brute-force minimum redundancy


def _scan_levels(s: int, k: int, r_max: int, cells_guard: int) -> tuple[int, tuple[int, ...]] | None:
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if r_max < 0:
        raise ValueError(f"r_max must be nonnegative, got {r_max}")
    for r in range(r_max + 1):
        if s * r > cells_guard:
            raise SearchGuardError(
                f"level r={r} means 2^(s*r)=2^{s * r} candidate parity blocks, "
                f"past the guard of 2^{cells_guard}; pass a larger cells_guard "
                f"to keep going"
            )
        cols = get_kernels().scan_level(s, r, k)
        if cols is not None:
            return r, cols
        log.debug("no %d-recovery code with s=%d at redundancy %d", k, s, r)
    return None


def min_redundancy_search(s: int, k: int, r_max: int, *,
                          cells_guard: int = DEFAULT_CELLS_GUARD) -> int | None:
    """Exact minimum redundancy of an s-coordinate k-recovery code, if <= r_max.

    Ascends one redundancy level at a time, exhausting all systematic parity
    blocks (up to column order) per level — every code is equivalent to a
    systematic one, so the answer is exact.  None means no code exists within
    r_max.  Cost grows as 2^(s*r); levels past the guard raise.
    """
    got = _scan_levels(s, k, r_max, cells_guard)
    return got[0] if got is not None else None


def min_redundancy_code(s: int, k: int, r_max: int, *,
                        cells_guard: int = DEFAULT_CELLS_GUARD) -> PirCode | None:
    """Like min_redundancy_search, but returns a witness code with certificate."""
    got = _scan_levels(s, k, r_max, cells_guard)
    if got is None:
        return None
    r, cols = got
    bits = [(1 << i) for i in range(s)]
    for t, col in enumerate(cols):
        for i in range(s):
            if (col >> i) & 1:
                bits[i] |= 1 << (s + t)
    g = BitMatrix(s, s + r, bits)
    cert = verify_pk(g, k)
    if cert is None:  # the kernel said this block passes; disagreement is a bug
        raise AssertionError(f"scan witness at r={r} failed re-verification")
    return PirCode(g, k, cert)


def count_systematic_pk(s: int, r: int, k: int, *,
                        cells_guard: int = DEFAULT_CELLS_GUARD) -> int:
    """Number of the 2^(s*r) systematic parity blocks with the k-recovery property.

    Exhaustive over ordered column tuples (zero columns included), so this is
    a census, not a search.
    """
    if s < 1 or r < 0 or k < 1:
        raise ValueError(f"bad parameters s={s}, r={r}, k={k}")
    if s * r > cells_guard:
        raise SearchGuardError(
            f"censusing 2^{s * r} parity blocks is past the guard of 2^{cells_guard}"
        )
    hits = 0
    for cols in product(range(1 << s), repeat=r):
        if get_kernels().systematic_pk(s, k, cols):
            hits += 1
    return hits


# ---------------------------------------------------------------------------
# text formats

_SET_RE = re.compile(r"\{([0-9,]*)\}$")


def format_certificate(cert: RecoveryCertificate) -> str:
    """One line per coordinate: 'i: {a,b};{c};...' with 1-based indices."""
    lines = []
    for i, coord in enumerate(cert.sets):
        body = ";".join("{" + ",".join(str(c + 1) for c in st) + "}" for st in coord)
        lines.append(f"{i + 1}: {body}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> RecoveryCertificate:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise FormatError("empty certificate text")
    coords = []
    k = None
    for lineno, line in enumerate(lines, start=1):
        head, sep, body = line.partition(":")
        if not sep:
            raise FormatError(f"line {lineno}: missing ':' separator")
        if head.strip() != str(lineno):
            raise FormatError(
                f"line {lineno}: expected coordinate {lineno}, got {head.strip()!r}"
            )
        groups = []
        for part in body.strip().split(";"):
            part = part.strip()
            m = _SET_RE.fullmatch(part)
            if m is None:
                raise FormatError(f"line {lineno}: malformed set {part!r}")
            inner = m.group(1)
            if inner:
                try:
                    vals = [int(v) for v in inner.split(",")]
                except ValueError as exc:
                    raise FormatError(f"line {lineno}: bad index in {part!r}") from exc
                if any(v < 1 for v in vals):
                    raise FormatError(f"line {lineno}: indices are 1-based, got {vals}")
                if len(set(vals)) != len(vals):
                    raise FormatError(f"line {lineno}: repeated index in {part!r}")
                groups.append(tuple(sorted(v - 1 for v in vals)))
            else:
                groups.append(())
        if k is None:
            k = len(groups)
        elif len(groups) != k:
            raise FormatError(
                f"line {lineno}: {len(groups)} sets, earlier lines had {k}"
            )
        coords.append(tuple(groups))
    assert k is not None
    try:
        return RecoveryCertificate(k, tuple(coords))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_code(code: PirCode) -> str:
    """'k <value>' header, then the generator in matrix text form."""
    return f"k {code.k}\n" + format_matrix(code.generator)


def parse_generator_text(text: str) -> tuple[BitMatrix, int | None]:
    """Matrix text with an optional leading 'k <value>' header."""
    k = None
    if text.startswith("k "):
        header, sep, rest = text.partition("\n")
        if not sep:
            raise FormatError("nothing after the k header")
        try:
            k = int(header[2:])
        except ValueError as exc:
            raise FormatError(f"malformed header {header!r}") from exc
        if k < 1:
            raise FormatError(f"k must be at least 1, got {k}")
        text = rest
    return parse_matrix(text), k


def parse_code(text: str) -> PirCode:
    g, k = parse_generator_text(text)
    if k is None:
        raise FormatError("code text must start with a 'k <value>' header")
    return PirCode(g, k)
