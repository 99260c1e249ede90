"""Bigraded building blocks: twists, monomials, bihomogeneous polynomials.

Everything lives on a product of two projective lines with fixed coordinates
z0, z1 on the first factor and w0, w1 on the second.  A twist is a pair of
integers (a, b).  A bihomogeneous polynomial of bidegree (a, b) is a rational
linear combination of monomials z0^i z1^j w0^k w1^l with i+j = a, k+l = b and
all exponents nonnegative; Laurent exponents only ever appear in cohomology
bases, never inside a polynomial.

Coefficients are exact rationals.  Nothing in this package touches a float.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple

from .errors import BidegreeMismatch, NegativeBidegree


@dataclass(frozen=True, order=True)
class Bidegree:
    """A twist (a, b): degree a on the z-factor, degree b on the w-factor."""

    a: int
    b: int

    def __add__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Bidegree") -> "Bidegree":
        return Bidegree(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Bidegree":
        return Bidegree(-self.a, -self.b)

    def serre(self) -> "Bidegree":
        """Twist of the Serre-dual line bundle: O(a,b)* = O(-2-a, -2-b)."""
        return Bidegree(-2 - self.a, -2 - self.b)

    def is_nonnegative(self) -> bool:
        return self.a >= 0 and self.b >= 0

    def pair(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


class Monomial(NamedTuple):
    """Exponent vector of z0^za z1^zb w0^wa w1^wb.

    Negative exponents are permitted; they are used by the Laurent models of
    higher cohomology.  Monomials inside a polynomial are always nonnegative.
    """

    za: int
    zb: int
    wa: int
    wb: int

    @property
    def bidegree(self) -> Bidegree:
        return Bidegree(self.za + self.zb, self.wa + self.wb)

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(
            self.za + other.za,
            self.zb + other.zb,
            self.wa + other.wa,
            self.wb + other.wb,
        )

    def is_polynomial(self) -> bool:
        return min(self) >= 0

    def __str__(self) -> str:
        parts = []
        for name, e in zip(("z0", "z1", "w0", "w1"), self):
            if e == 0:
                continue
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"


ONE = Monomial(0, 0, 0, 0)
_VAR_INDEX = {"z0": 0, "z1": 1, "w0": 2, "w1": 3}
_FACTOR_RE = re.compile(r"^(z0|z1|w0|w1)(?:\^(-?\d+))?$")


def monomial_basis(d: Bidegree) -> list[Monomial]:
    """All section monomials of bidegree d, in the fixed canonical order.

    Order is lexicographic in (za, wa) with za descending, then wa
    descending, e.g. (1,1) -> [z0*w0, z0*w1, z1*w0, z1*w1].  Empty when
    either component of d is negative.
    """
    if d.a < 0 or d.b < 0:
        return []
    return [
        Monomial(za, d.a - za, wa, d.b - wa)
        for za in range(d.a, -1, -1)
        for wa in range(d.b, -1, -1)
    ]


class BiPoly:
    """A bihomogeneous polynomial with exact rational coefficients.

    Instances are immutable after construction.  The zero polynomial keeps a
    bidegree so that matrix slots of forced-zero entries stay well typed; its
    bidegree may have negative components.
    """

    __slots__ = ("bidegree", "terms")

    def __init__(self, bidegree: Bidegree, terms: Mapping[Monomial, Fraction | int]):
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in terms.items():
            c = Fraction(coeff)
            if c == 0:
                continue
            if not mono.is_polynomial():
                raise ValueError(f"negative exponent in polynomial term {mono}")
            if mono.bidegree != bidegree:
                raise BidegreeMismatch(
                    f"term {mono} has bidegree {mono.bidegree}, expected {bidegree}"
                )
            clean[mono] = c
        object.__setattr__(self, "bidegree", bidegree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def zero(cls, bidegree: Bidegree) -> "BiPoly":
        return cls(bidegree, {})

    @classmethod
    def constant(cls, c: Fraction | int) -> "BiPoly":
        return cls(Bidegree(0, 0), {ONE: Fraction(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.bidegree == other.bidegree and self.terms == other.terms

    def __hash__(self):
        return hash((self.bidegree, frozenset(self.terms.items())))

    def __add__(self, other: "BiPoly") -> "BiPoly":
        if self.is_zero() and other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.bidegree != other.bidegree:
            raise BidegreeMismatch(
                f"cannot add bidegrees {self.bidegree} and {other.bidegree}"
            )
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + c
        return BiPoly(self.bidegree, terms)

    def __neg__(self) -> "BiPoly":
        return BiPoly(self.bidegree, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        bidegree = self.bidegree + other.bidegree
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1.times(m2)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return BiPoly(bidegree, terms)

    def scale(self, c: Fraction | int) -> "BiPoly":
        c = Fraction(c)
        if c == 0:
            return BiPoly.zero(self.bidegree)
        return BiPoly(self.bidegree, {m: c * v for m, v in self.terms.items()})

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in the canonical (za descending, wa descending) order."""
        return sorted(self.terms.items(), key=lambda kv: (-kv[0].za, -kv[0].wa))

    def eval_modp(self, point: tuple[int, int, int, int], p: int) -> int:
        """Value at (z0,z1,w0,w1) with coordinates in the prime field F_p."""
        from .linalg import fraction_modp  # local import avoids a cycle

        z0, z1, w0, w1 = (x % p for x in point)
        total = 0
        for mono, c in self.terms.items():
            v = (
                pow(z0, mono.za, p)
                * pow(z1, mono.zb, p)
                % p
                * pow(w0, mono.wa, p)
                % p
                * pow(w1, mono.wb, p)
                % p
            )
            total = (total + fraction_modp(c, p) * v) % p
        return total

    def to_text(self) -> str:
        """Canonical text form, e.g. "3*z0*w1 + -1/2*w0". Zero is "0"."""
        if self.is_zero():
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            if mono == ONE:
                parts.append(str(c))
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"BiPoly({self.bidegree}, {self.to_text()})"


def bipoly_from_text(text: str, bidegree: Bidegree | None = None) -> BiPoly:
    """Parse the canonical text form.

    ``bidegree`` is required to give the zero polynomial a home; for nonzero
    input it is checked against the parsed terms when provided.
    """
    text = text.strip()
    if text in ("0", ""):
        if bidegree is None:
            raise ValueError("zero polynomial needs an explicit bidegree")
        return BiPoly.zero(bidegree)
    terms: dict[Monomial, Fraction] = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"empty term in {text!r}")
        factors = chunk.split("*")
        coeff = Fraction(1)
        exps = [0, 0, 0, 0]
        for pos, tok in enumerate(factors):
            tok = tok.strip()
            m = _FACTOR_RE.match(tok)
            if m:
                exps[_VAR_INDEX[m.group(1)]] += int(m.group(2) or 1)
            elif pos == 0:
                coeff = Fraction(tok)
            else:
                raise ValueError(f"cannot parse factor {tok!r} in {text!r}")
        mono = Monomial(*exps)
        terms[mono] = terms.get(mono, Fraction(0)) + coeff
    degrees = {m.bidegree for m in terms}
    if len(degrees) != 1:
        raise BidegreeMismatch(f"mixed bidegrees in {text!r}")
    parsed_degree = degrees.pop()
    if bidegree is not None and parsed_degree != bidegree and any(terms.values()):
        raise BidegreeMismatch(
            f"parsed bidegree {parsed_degree}, expected {bidegree}"
        )
    return BiPoly(parsed_degree, terms)


def random_bipoly(d: Bidegree, height: int, rng) -> BiPoly:
    """Random integer-coefficient polynomial of bidegree d.

    Every monomial of the section basis receives a coefficient drawn
    uniformly from [-height, height]; the draw order is the canonical basis
    order, so a fixed rng state always reproduces the same polynomial.
    """
    if d.a < 0 or d.b < 0:
        raise NegativeBidegree(f"no sections in bidegree {d}")
    if height < 1:
        raise ValueError("height must be a positive integer")
    terms = {m: Fraction(rng.randint(-height, height)) for m in monomial_basis(d)}
    return BiPoly(d, terms)


@dataclass(frozen=True)
class LineBundleSum:
    """An ordered finite direct sum of line bundles O(a_i, b_i).

    Order matters: the summands index rows/columns of every matrix built
    against the sum.  The empty sum is the zero bundle.
    """

    summands: tuple[Bidegree, ...] = ()

    @classmethod
    def of(cls, *pairs: tuple[int, int] | Bidegree) -> "LineBundleSum":
        out = []
        for p in pairs:
            out.append(p if isinstance(p, Bidegree) else Bidegree(*p))
        return cls(tuple(out))

    @classmethod
    def repeated(cls, d: Bidegree | tuple[int, int], n: int) -> "LineBundleSum":
        if not isinstance(d, Bidegree):
            d = Bidegree(*d)
        return cls((d,) * n)

    def __len__(self) -> int:
        return len(self.summands)

    def __iter__(self) -> Iterator[Bidegree]:
        return iter(self.summands)

    def __add__(self, other: "LineBundleSum") -> "LineBundleSum":
        return LineBundleSum(self.summands + other.summands)

    def twist(self, t: Bidegree) -> "LineBundleSum":
        return LineBundleSum(tuple(s + t for s in self.summands))

    def serre(self) -> "LineBundleSum":
        """Summand-wise Serre dual; the summand order is preserved."""
        return LineBundleSum(tuple(s.serre() for s in self.summands))

    def is_zero(self) -> bool:
        return not self.summands

    def __str__(self) -> str:
        if not self.summands:
            return "0"
        return " + ".join(f"O{s}" for s in self.summands)
