"""Exact dense linear algebra over the rationals, with a prime-field fast path.

Everything a caller can observe is exact.  ``rank`` returns the true rank
over Q: internally it first row-reduces modulo a large prime, and if every
row (or column) survives, that already certifies the rank over Q, because a
maximal minor that is a unit mod p is in particular nonzero.  Matrices that
are not of full rank fall back to fraction-free (Bareiss) elimination over
the integers.  ``rank_modp`` exposes the modular screening rank on its own;
it is a lower bound for the rational rank and is never taken as exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import DenominatorDivisibleByP

DEFAULT_PRIME = 2**31 - 1


def fraction_modp(x: Fraction | int, p: int) -> int:
    """Image of a rational number in F_p; the denominator must be a unit."""
    x = Fraction(x)
    den = x.denominator % p
    if den == 0:
        raise DenominatorDivisibleByP(f"denominator of {x} vanishes mod {p}")
    return x.numerator % p * pow(den, p - 2, p) % p


@dataclass(frozen=True)
class ExactMatrix:
    """A dense matrix with exact entries.

    A rational matrix stores Fractions and carries no modulus.  A modular
    matrix stores ints in [0, p) and carries its prime.  Instances are
    immutable; all operations return new matrices.
    """

    rows: int
    cols: int
    entries: tuple[tuple, ...]
    modulus: int | None = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        rows = [tuple(Fraction(x) for x in r) for r in rows]
        n = len(rows)
        if n:
            m = len(rows[0])
            if any(len(r) != m for r in rows):
                raise ValueError("ragged rows")
        else:
            m = 0 if cols is None else cols
        return cls(n, m, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.from_rows(
            [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        )

    @classmethod
    def zero(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows)))

    def transpose(self) -> "ExactMatrix":
        t = tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        return ExactMatrix(self.cols, self.rows, t, self.modulus)

    def reduce_modp(self, p: int) -> "ExactMatrix":
        if self.modulus is not None:
            if self.modulus == p:
                return self
            raise ValueError("matrix already carries a different modulus")
        ent = tuple(tuple(fraction_modp(x, p) for x in row) for row in self.entries)
        return ExactMatrix(self.rows, self.cols, ent, p)

    def __getitem__(self, ij: tuple[int, int]):
        return self.entries[ij[0]][ij[1]]


def _integer_rows(mat: ExactMatrix) -> list[list[int]]:
    """Rows rescaled to integers; row scaling leaves the rank unchanged."""
    out = []
    for row in mat.entries:
        mult = 1
        for x in row:
            d = x.denominator
            if d != 1:
                mult = mult * d // gcd(mult, d)
        if mult == 1:
            # integer row already; skip the Fraction arithmetic entirely
            out.append([x.numerator for x in row])
        else:
            out.append([x.numerator * (mult // x.denominator) for x in row])
    return out


def _rank_mod(int_rows: list[list[int]], p: int) -> int:
    """Row-reduction rank over F_p.  Vectorised; products stay below 2^63."""
    n = len(int_rows)
    m = len(int_rows[0]) if n else 0
    if n == 0 or m == 0:
        return 0
    a = np.array([[x % p for x in row] for row in int_rows], dtype=np.int64)
    rank = 0
    for col in range(m):
        if rank == n:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        below = np.nonzero(a[rank + 1 :, col])[0]
        if below.size:
            idx = rank + 1 + below
            factors = a[idx, col] * inv % p
            a[idx, col:] = (a[idx, col:] - factors[:, None] * a[rank, col:]) % p
        rank += 1
    return rank


def _bareiss_rank(int_rows: list[list[int]]) -> int:
    """Fraction-free elimination rank over Z; exact but slower than mod p."""
    mat = [row[:] for row in int_rows]
    n = len(mat)
    m = len(mat[0]) if n else 0
    rank = 0
    prev = 1
    for col in range(m):
        if rank == n:
            break
        piv = next((r for r in range(rank, n) if mat[r][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            mat[rank], mat[piv] = mat[piv], mat[rank]
        pivot = mat[rank][col]
        prow = mat[rank]
        for r in range(rank + 1, n):
            row = mat[r]
            factor = row[col]
            # Every remaining row must be updated, zero factor included;
            # the exactness of the division depends on it.
            for c in range(col + 1, m):
                row[c] = (pivot * row[c] - factor * prow[c]) // prev
            row[col] = 0
        prev = pivot
        rank += 1
    return rank


def rank(mat: ExactMatrix) -> int:
    """Exact rank.  Kernel dim = cols - rank; cokernel dim = rows - rank."""
    if mat.rows == 0 or mat.cols == 0:
        return 0
    if mat.modulus is not None:
        return _rank_mod([list(r) for r in mat.entries], mat.modulus)
    ints = _integer_rows(mat)
    full = min(mat.rows, mat.cols)
    screened = _rank_mod(ints, DEFAULT_PRIME)
    if screened == full:
        # A full-size minor is a unit mod p, hence nonzero over Q: exact.
        return screened
    return _bareiss_rank(ints)


def rank_modp(mat: ExactMatrix, p: int) -> int:
    """Rank of the image of the matrix in F_p.  Always <= rank over Q."""
    if mat.rows == 0 or mat.cols == 0:
        return 0
    if mat.modulus is not None:
        if mat.modulus != p:
            raise ValueError("matrix carries a different modulus")
        return _rank_mod([list(r) for r in mat.entries], p)
    reduced = mat.reduce_modp(p)
    return _rank_mod([list(r) for r in reduced.entries], p)


def nullspace(mat: ExactMatrix) -> list[tuple[Fraction, ...]]:
    """Canonical basis of the right kernel over Q.

    Pivoting is deterministic (first nonzero entry in row-major order), and
    each basis vector is the unique kernel element with a 1 in its free
    column and 0 in the other free columns, so the basis is reproducible.
    """
    if mat.modulus is not None:
        raise ValueError("nullspace is only implemented over Q")
    n, m = mat.rows, mat.cols
    if m == 0:
        return []
    if n == 0:
        return [
            tuple(Fraction(int(i == j)) for i in range(m)) for j in range(m)
        ]
    # Fraction-free forward echelon; back-substitution is exact afterwards.
    work = _integer_rows(mat)
    pivots: list[int] = []
    rank_ = 0
    prev = 1
    for col in range(m):
        if rank_ == n:
            break
        piv = next((r for r in range(rank_, n) if work[r][col] != 0), None)
        if piv is None:
            continue
        if piv != rank_:
            work[rank_], work[piv] = work[piv], work[rank_]
        pivot = work[rank_][col]
        prow = work[rank_]
        for r in range(rank_ + 1, n):
            row = work[r]
            factor = row[col]
            for c in range(col + 1, m):
                row[c] = (pivot * row[c] - factor * prow[c]) // prev
            row[col] = 0
        prev = pivot
        pivots.append(col)
        rank_ += 1
    pivot_set = set(pivots)
    free_cols = [c for c in range(m) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for i in range(rank_ - 1, -1, -1):
            pc = pivots[i]
            row = work[i]
            s = Fraction(row[fc]) if fc > pc else Fraction(0)
            for j in range(i + 1, rank_):
                cj = pivots[j]
                if row[cj]:
                    s += row[cj] * v[cj]
            v[pc] = -s / row[pc]
        basis.append(tuple(v))
    return basis


def matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    bt = b.transpose().entries
    rows = tuple(
        tuple(sum((x * y for x, y in zip(ra, cb)), Fraction(0)) for cb in bt)
        for ra in a.entries
    )
    return ExactMatrix(a.rows, b.cols, rows)


def apply_matrix(mat: ExactMatrix, vec: Iterable) -> tuple[Fraction, ...]:
    v = [Fraction(x) for x in vec]
    if len(v) != mat.cols:
        raise ValueError("vector length mismatch")
    return tuple(sum((r * x for r, x in zip(row, v)), Fraction(0)) for row in mat.entries)


def kernel_dim(mat: ExactMatrix) -> int:
    return mat.cols - rank(mat)


def cokernel_dim(mat: ExactMatrix) -> int:
    return mat.rows - rank(mat)


def image_dim(mat: ExactMatrix) -> int:
    return rank(mat)
