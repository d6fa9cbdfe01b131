"""Mechanical replay of the 3-server redundancy bound on a concrete code.

Given a verified 3-recovery code, every step of the counting argument is
re-executed on actual vectors: systematization, the per-coordinate offset
vectors and their disjoint supports, the recombination identity, membership
of the transform columns in the span of pairwise parity products, and the
final dimension count that forces r(r-1) >= 2s.  Any step that fails raises
ProofReplayError naming the step and coordinate, so a passing replay is an
end-to-end check of the argument on that instance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import PirCode, RecoveryCertificate, check_certificate, verify_pk
from .gf2 import (
    BitMatrix,
    BitVector,
    SystematizedForm,
    VectorSet,
    offset_product_sum,
    pairwise_products,
    span_basis,
    span_contains,
    systematize,
)

__all__ = ["ProofReplayError", "CoordinateReplay", "ProofWitness", "build_proof_witness"]


class ProofReplayError(RuntimeError):
    """A replayed proof step failed on this instance."""


@dataclass(frozen=True)
class CoordinateReplay:
    """Verified split of coordinate i's three recovery sets (permuted positions).

    systematic[j] and parity[j] partition recovery set j; offsets[j] is the
    sum of unit vectors over systematic[j] and satisfies
    transform_column + offsets[j] = sum of parity columns over parity[j].
    """

    index: int
    systematic: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    parity: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    offsets: tuple[BitVector, BitVector, BitVector]


@dataclass(frozen=True)
class ProofWitness:
    """Everything the replay touched, for inspection and reporting."""

    code: PirCode
    form: SystematizedForm
    transform_columns: tuple[BitVector, ...]
    parity_columns: tuple[BitVector, ...]
    coordinates: tuple[CoordinateReplay, ...]
    x_set: VectorSet
    x_square: VectorSet
    span_dim: int

    @property
    def s(self) -> int:
        return self.code.s

    @property
    def r(self) -> int:
        return self.code.redundancy

    def summary(self) -> str:
        s, r = self.s, self.r
        lines = [
            f"replayed the redundancy bound on s={s} n={self.code.n} r={r}",
            "systematization verified: transform + column permutation give [I | P]",
            f"all {s} coordinates: disjoint offsets, parity-sum identity, "
            "recombination collapse, pair products in span",
            f"pairwise products: {len(self.x_square)} distinct of at most "
            f"r(r-1)/2 = {r * (r - 1) // 2}",
            f"span of products has dimension {self.span_dim} >= s = {s}",
            f"hence r(r-1) = {r * (r - 1)} >= 2s = {2 * s}",
        ]
        return "\n".join(lines) + "\n"


def _fail(step: str, detail: str) -> ProofReplayError:
    return ProofReplayError(f"{step}: {detail}")


def build_proof_witness(code: PirCode) -> ProofWitness:
    """Replay the counting argument on code; raises ProofReplayError on any gap."""
    if code.k != 3:
        raise ValueError(f"the replayed argument is about 3-recovery codes, got k={code.k}")
    g = code.generator
    s = g.rows
    cert = code.certificate
    if cert is None:
        cert = verify_pk(g, 3)
        if cert is None:
            raise _fail("recovery property", "no 3 disjoint recovery sets for some coordinate")
    if not check_certificate(g, cert, 3):
        raise _fail("recovery property", "attached certificate does not verify")

    form = systematize(g)
    r = form.redundancy
    # replay the factorization itself rather than trusting systematize
    if form.transform @ g.permute_columns(form.permutation) != form.systematic_matrix():
        raise _fail("systematization", "transform times permuted generator is not [I | P]")

    pos_of = {orig: pos for pos, orig in enumerate(form.permutation)}
    a_cols = tuple(form.transform.column(i) for i in range(s))
    x_cols = tuple(form.parity.column(t) for t in range(r)) if form.parity is not None else ()

    x_set = VectorSet(s, x_cols) if x_cols else VectorSet(s)
    x_square = pairwise_products(x_cols, s)
    basis = span_basis(x_square)

    coords = []
    for i in range(s):
        groups = cert.sets[i]
        sys_parts: list[tuple[int, ...]] = []
        par_parts: list[tuple[int, ...]] = []
        offsets: list[BitVector] = []
        for j, group in enumerate(groups):
            positions = sorted(pos_of[c] for c in group)
            sp = tuple(p for p in positions if p < s)
            pp = tuple(p - s for p in positions if p >= s)
            v = BitVector.zeros(s)
            for p in sp:
                v += BitVector.unit(s, p)
            # each set must reach the transform column through parity columns
            rhs = BitVector.zeros(s)
            for t in pp:
                rhs += x_cols[t]
            if a_cols[i] + v != rhs:
                raise _fail(
                    "parity-sum identity",
                    f"coordinate {i}, set {j}: offset does not match its parity columns",
                )
            sys_parts.append(sp)
            par_parts.append(pp)
            offsets.append(v)
        v1, v2, v3 = offsets
        if (v1 * v2).bits or (v1 * v3).bits or (v2 * v3).bits:
            raise _fail("disjoint offsets", f"coordinate {i}: offset supports overlap")
        if offset_product_sum(a_cols[i], v1, v2, v3) != a_cols[i]:
            raise _fail("recombination", f"coordinate {i}: identity does not collapse")
        for (x, y) in ((0, 1), (0, 2), (1, 2)):
            prod = (a_cols[i] + offsets[x]) * (a_cols[i] + offsets[y])
            if basis.reduce(prod.bits) != 0:
                raise _fail(
                    "span membership",
                    f"coordinate {i}: offset product {x},{y} outside the product span",
                )
        if basis.reduce(a_cols[i].bits) != 0:
            raise _fail("span membership", f"coordinate {i}: transform column outside the span")
        coords.append(
            CoordinateReplay(i, tuple(sys_parts), tuple(par_parts), (v1, v2, v3))
        )

    span_dim = len(basis)
    if span_dim < s:
        raise _fail("dimension count", f"product span has dimension {span_dim} < s = {s}")
    if len(x_square) > r * (r - 1) // 2:
        raise _fail("pair count", f"{len(x_square)} products from {r} columns")
    if r * (r - 1) < 2 * s:
        raise _fail("counting bound", f"r(r-1) = {r * (r - 1)} < 2s = {2 * s}")

    return ProofWitness(
        code=code,
        form=form,
        transform_columns=a_cols,
        parity_columns=x_cols,
        coordinates=tuple(coords),
        x_set=x_set,
        x_square=x_square,
        span_dim=span_dim,
    )
