"""Cohomology of line bundles on the product of two lines, made explicit.

On a single line, sections of O(n) are spanned by monomials with nonnegative
exponents summing to n, and H^1(O(n)) is spanned Cech-style by Laurent
monomials with both exponents <= -1.  Crossing two lines, the Kunneth
decomposition turns every cohomology group of O(a,b) into a span of Laurent
monomials cut out by a sign pattern on the exponents:

    H^0: all four exponents >= 0;
    H^1: z-exponents >= 0 and w-exponents <= -1, or the mirror image;
    H^2: all four exponents <= -1;

with z-exponents summing to a and w-exponents to b in every case.  A map of
line bundles acts on these models by plain exponent addition: any product
monomial that leaves the sign pattern of the target group is a coboundary
and is dropped.  That one rule realises every induced map H^i(phi(t)) as an
exact matrix, for every degree and twist uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .bigraded import Bidegree, Monomial, monomial_basis
from .linalg import ExactMatrix

if TYPE_CHECKING:  # pragma: no cover
    from .monads import SheafMap


def coh_dim(i: int, d: Bidegree) -> int:
    """Dimension of H^i(O(d)) in closed form."""
    a, b = d.a, d.b
    if i == 0:
        return (a + 1) * (b + 1) if a >= 0 and b >= 0 else 0
    if i == 2:
        return (a + 1) * (b + 1) if a <= -2 and b <= -2 else 0
    if i == 1:
        n = 0
        if a >= 0 and b <= -2:
            n += (a + 1) * (-b - 1)
        if a <= -2 and b >= 0:
            n += (-a - 1) * (b + 1)
        return n
    raise ValueError(f"cohomological degree must be 0, 1 or 2, got {i}")


@dataclass(frozen=True)
class CohBasis:
    """Ordered Laurent-monomial basis of H^i(O(twist))."""

    twist: Bidegree
    degree: int
    basis: tuple[Monomial, ...]

    def __len__(self) -> int:
        return len(self.basis)

    def index(self) -> dict[Monomial, int]:
        return {m: k for k, m in enumerate(self.basis)}


def coh_basis(i: int, d: Bidegree) -> CohBasis:
    """Canonical basis of H^i(O(d)).

    Ordering: within each sign-pattern block, za descends then wa descends;
    for H^1 the (z >= 0, w <= -1) block precedes its mirror image.
    """
    a, b = d.a, d.b
    monos: list[Monomial] = []
    if i == 0:
        monos = monomial_basis(d)
    elif i == 1:
        if a >= 0 and b <= -2:
            monos.extend(
                Monomial(za, a - za, wa, b - wa)
                for za in range(a, -1, -1)
                for wa in range(-1, b, -1)
            )
        if a <= -2 and b >= 0:
            monos.extend(
                Monomial(za, a - za, wa, b - wa)
                for za in range(-1, a, -1)
                for wa in range(b, -1, -1)
            )
    elif i == 2:
        if a <= -2 and b <= -2:
            monos = [
                Monomial(za, a - za, wa, b - wa)
                for za in range(-1, a, -1)
                for wa in range(-1, b, -1)
            ]
    else:
        raise ValueError(f"cohomological degree must be 0, 1 or 2, got {i}")
    return CohBasis(d, i, tuple(monos))


@dataclass(frozen=True)
class InducedMap:
    """The matrix of H^i(phi(twist)) against the canonical bases."""

    map: "SheafMap"
    degree: int
    twist: Bidegree
    matrix: ExactMatrix
    source_bases: tuple[CohBasis, ...]
    target_bases: tuple[CohBasis, ...]


def induced_map(phi: "SheafMap", i: int, t: Bidegree) -> InducedMap:
    """Exact matrix of H^i(phi(t)), block-structured by summand.

    Block (u, v) sends the basis of H^i(O(source_v + t)) into the basis of
    H^i(O(target_u + t)) by multiplying with the (u, v) entry and dropping
    product monomials outside the target sign pattern.  Blocks where either
    side has no cohomology are empty.
    """
    src_bases = tuple(coh_basis(i, s + t) for s in phi.source.summands)
    tgt_bases = tuple(coh_basis(i, u + t) for u in phi.target.summands)
    col_offsets = _offsets(src_bases)
    row_offsets = _offsets(tgt_bases)
    rows = row_offsets[-1]
    cols = col_offsets[-1]
    data = [[Fraction(0)] * cols for _ in range(rows)]
    for u, tgt in enumerate(tgt_bases):
        if not tgt.basis:
            continue
        lookup = tgt.index()
        r0 = row_offsets[u]
        for v, src in enumerate(src_bases):
            if not src.basis:
                continue
            entry = phi.entries[u][v]
            if entry.is_zero():
                continue
            c0 = col_offsets[v]
            for k, mono in enumerate(src.basis):
                col = c0 + k
                for term, coeff in entry.terms.items():
                    target_mono = term.times(mono)
                    row = lookup.get(target_mono)
                    if row is not None:
                        data[r0 + row][col] += coeff
    matrix = ExactMatrix(rows, cols, tuple(tuple(r) for r in data))
    return InducedMap(phi, i, t, matrix, src_bases, tgt_bases)


def _offsets(bases: tuple[CohBasis, ...]) -> list[int]:
    out = [0]
    for b in bases:
        out.append(out[-1] + len(b))
    return out
