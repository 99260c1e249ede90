"""Monads of line-bundle sums and the cohomology of their middle term.

A monad here is a three-term complex A -> B -> C of direct sums of line
bundles with g o f = 0; once f is an injective bundle map and g a surjective
bundle map, E = ker(g)/im(f) is a vector bundle, and the cohomology of every
twist E(t) is computable from ranks of the induced matrices H^i(f(t)),
H^i(g(t)) whenever the three terms carry cohomology in a single degree.
The degenerate shapes with empty A (kernel bundles) or empty C (cokernel
bundles) are first-class citizens: their blocks are simply empty.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .bigraded import Bidegree, BiPoly, LineBundleSum
from .cohomology import coh_dim, induced_map
from .errors import MixedMonadCohomology, ShapeMismatch
from .linalg import DEFAULT_PRIME, ExactMatrix, rank

Pair = tuple[int, int]


@dataclass(frozen=True)
class SheafMap:
    """A matrix of bihomogeneous polynomials between line-bundle sums.

    Entry (i, j) maps summand j of the source into summand i of the target,
    so it must be bihomogeneous of bidegree target[i] - source[j]; when that
    difference has a negative component the entry is forced to zero.
    """

    source: LineBundleSum
    target: LineBundleSum
    entries: tuple[tuple[BiPoly, ...], ...]

    def __post_init__(self):
        if len(self.entries) != len(self.target):
            raise ValueError("entry rows must match target summands")
        for i, row in enumerate(self.entries):
            if len(row) != len(self.source):
                raise ValueError("entry columns must match source summands")
            for j, entry in enumerate(row):
                expected = self.target.summands[i] - self.source.summands[j]
                if entry.is_zero():
                    continue
                if entry.bidegree != expected:
                    raise ValueError(
                        f"entry ({i},{j}) has bidegree {entry.bidegree}, "
                        f"expected {expected}"
                    )
                if expected.a < 0 or expected.b < 0:
                    raise ValueError(
                        f"entry ({i},{j}) must be zero in bidegree {expected}"
                    )

    @classmethod
    def build(cls, source: LineBundleSum, target: LineBundleSum, entries) -> "SheafMap":
        """Normalise a nested sequence of BiPoly/None into a SheafMap."""
        rows = []
        for i, row in enumerate(entries):
            out = []
            for j, e in enumerate(row):
                expected = target.summands[i] - source.summands[j]
                if e is None:
                    e = BiPoly.zero(expected)
                out.append(e)
            rows.append(tuple(out))
        return cls(source, target, tuple(rows))

    @classmethod
    def zero(cls, source: LineBundleSum, target: LineBundleSum) -> "SheafMap":
        return cls.build(source, target, [[None] * len(source) for _ in range(len(target))])

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def twist(self, t: Bidegree) -> "SheafMap":
        """The same matrix read between the twisted sums."""
        return SheafMap(self.source.twist(t), self.target.twist(t), self.entries)

    def star(self) -> "SheafMap":
        """Serre dual: the transposed matrix between the dual sums."""
        transposed = tuple(
            tuple(self.entries[i][j] for i in range(len(self.target)))
            for j in range(len(self.source))
        )
        return SheafMap(self.target.serre(), self.source.serre(), transposed)

    def eval_modp(self, point: tuple[int, int, int, int], p: int) -> ExactMatrix:
        ent = tuple(
            tuple(e.eval_modp(point, p) for e in row) for row in self.entries
        )
        return ExactMatrix(len(self.target), len(self.source), ent, p)

    def scale_to_integers(self) -> "SheafMap":
        """Clear all denominators; a nonzero scalar changes no rank condition."""
        dens = [
            c.denominator
            for row in self.entries
            for e in row
            for c in e.terms.values()
        ]
        mult = lcm(*dens) if dens else 1
        if mult == 1:
            return self
        scaled = tuple(
            tuple(e.scale(mult) for e in row) for row in self.entries
        )
        return SheafMap(self.source, self.target, scaled)


def compose(g: SheafMap, f: SheafMap) -> SheafMap:
    """Matrix product g o f with exact polynomial arithmetic."""
    if f.target.summands != g.source.summands:
        raise ShapeMismatch(
            f"cannot compose: middle terms {f.target} and {g.source} differ"
        )
    rows = []
    for i in range(len(g.target)):
        row = []
        for j in range(len(f.source)):
            expected = g.target.summands[i] - f.source.summands[j]
            acc = BiPoly.zero(expected)
            for k in range(len(g.source)):
                a = g.entries[i][k]
                b = f.entries[k][j]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b if not acc.is_zero() else a * b
            row.append(acc)
        rows.append(tuple(row))
    return SheafMap(f.source, g.target, tuple(rows))


@dataclass(frozen=True)
class Monad:
    """The complex A --f--> B --g--> C housing E = ker(g)/im(f).

    A and/or C may be the zero bundle.  Construction checks shapes only;
    g o f = 0 and the bundle-map conditions are certified separately so that
    corrupt inputs can be loaded and then reported on.
    """

    A: LineBundleSum
    B: LineBundleSum
    C: LineBundleSum
    f: SheafMap
    g: SheafMap

    def __post_init__(self):
        if self.f.source.summands != self.A.summands or self.f.target.summands != self.B.summands:
            raise ValueError("f must map A to B")
        if self.g.source.summands != self.B.summands or self.g.target.summands != self.C.summands:
            raise ValueError("g must map B to C")

    def terms(self) -> tuple[LineBundleSum, LineBundleSum, LineBundleSum]:
        return (self.A, self.B, self.C)


def composition_is_zero(m: Monad) -> bool:
    if m.A.is_zero() or m.C.is_zero():
        return True
    return compose(m.g, m.f).is_zero()


def twist(m: Monad, t: Bidegree) -> Monad:
    return Monad(m.A.twist(t), m.B.twist(t), m.C.twist(t), m.f.twist(t), m.g.twist(t))


def serre_dual(m: Monad) -> Monad:
    """The Serre-dual monad C* -> B* -> A*; an involution on the nose."""
    return Monad(m.C.serre(), m.B.serre(), m.A.serre(), m.g.star(), m.f.star())


def euler_char(m: Monad, t: Bidegree) -> int:
    """chi(E(t)) = chi(B(t)) - chi(A(t)) - chi(C(t)); exact integer."""

    def chi(bundle: LineBundleSum) -> int:
        return sum((s.a + t.a + 1) * (s.b + t.b + 1) for s in bundle.summands)

    return chi(m.B) - chi(m.A) - chi(m.C)


def monad_coh_degrees(m: Monad, t: Bidegree) -> set[int]:
    """Degrees i where some term of the twisted monad has H^i != 0."""
    out = set()
    for bundle in m.terms():
        for s in bundle.summands:
            for i in (0, 1, 2):
                if i not in out and coh_dim(i, s + t) > 0:
                    out.add(i)
    return out


def _total_dim(bundle: LineBundleSum, i: int, t: Bidegree) -> int:
    return sum(coh_dim(i, s + t) for s in bundle.summands)


def bundle_coh(m: Monad, t: Bidegree) -> tuple[int, int, int]:
    """(h0, h1, h2) of E(t) via the single-degree spectral formulas.

    With the monad cohomology concentrated in degree i, the E_2 page of the
    column filtration degenerates and gives, writing rf/rg for the ranks of
    H^i(f(t)) and H^i(g(t)) and hA/hB/hC for the term dimensions:

        i = 0:  h0 = (hB - rg) - rf,   h1 = hC - rg,          h2 = 0
        i = 1:  h0 = hA - rf,          h1 = (hB - rg) - rf,   h2 = hC - rg
        i = 2:  h0 = 0,                h1 = hA - rf,          h2 = (hB - rg) - rf

    Twists with mixed monad cohomology are refused: no d2 differential is
    implemented, and none is ever needed for the shapes built here.
    """
    degrees = monad_coh_degrees(m, t)
    if not degrees:
        return (0, 0, 0)
    if len(degrees) > 1:
        raise MixedMonadCohomology(t, degrees)
    (i,) = degrees
    rf = rank(induced_map(m.f, i, t).matrix)
    rg = rank(induced_map(m.g, i, t).matrix)
    h_a = _total_dim(m.A, i, t)
    h_b = _total_dim(m.B, i, t)
    h_c = _total_dim(m.C, i, t)
    middle = (h_b - rg) - rf
    if i == 0:
        return (middle, h_c - rg, 0)
    if i == 1:
        return (h_a - rf, middle, h_c - rg)
    return (0, h_a - rf, middle)


@dataclass(frozen=True)
class HilbertParams:
    """Target Hilbert polynomial r*P with P(x,y) = (x-alpha)(y-beta) - gamma."""

    r: int
    gamma: Fraction
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.r < 1:
            raise ValueError("rank multiplier must be a positive integer")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if (self.r * self.gamma).denominator != 1:
            raise ValueError(f"r*gamma = {self.r * self.gamma} is not an integer")

    @property
    def r_gamma(self) -> int:
        return int(self.r * self.gamma)

    def hilbert(self, x: int, y: int) -> Fraction:
        return self.r * ((x - self.alpha) * (y - self.beta) - self.gamma)


def minimal_rank_multiplier(gamma: Fraction) -> int:
    """Smallest r making the monad exponents integral.

    For gamma <= 1 the kernel construction needs r >= 2, so a bare r = 1 is
    doubled.
    """
    gamma = Fraction(gamma)
    r = gamma.denominator
    if gamma <= 1 and r < 2:
        r *= 2
    return r


@dataclass(frozen=True)
class CertifyConfig:
    """Knobs for randomized bundle-map certification."""

    seed: int = 0
    prime: int = DEFAULT_PRIME
    fiber_samples: int = 50
    window_radius: int | None = None


@dataclass(frozen=True)
class SurjectivityCertificate:
    """Outcome of certifying that a map is surjective on every fiber.

    fiber_checks record (point mod p, fiber rank) samples; window_checks
    record cokernel dimensions of induced section maps on an upper band of
    twists.  The verdict is ``certified`` only when every fiber rank is
    maximal and every recorded window cokernel vanishes.
    """

    fiber_checks: tuple[tuple[tuple[int, int, int, int], int], ...]
    window_checks: tuple[tuple[Pair, int], ...]
    verdict: str
    detail: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "detail": self.detail,
            "fiber_checks": [
                {"point": list(pt), "rank": rk} for pt, rk in self.fiber_checks
            ],
            "window_checks": [
                {"twist": list(t), "cokernel": c} for t, c in self.window_checks
            ],
        }


def _certification_twists(radius: int, target: LineBundleSum) -> list[Bidegree]:
    """Check twists for the section-level cokernel test.

    Three twists on the frontier a + b = radius: the two extremes and a
    near-square one.  Each is pushed up until the target is globally
    generated there, which is what makes a vanishing cokernel a proof: the
    sections of the target then generate every stalk of the cokernel sheaf,
    so a quotient with no new sections is the zero sheaf.  Three independent
    witnesses are demanded purely for conservatism; one would do.
    """
    radius = max(radius, 2)
    c = 1
    while c * c < radius - 1:
        c += 1
    gen_a = max((0, *(-s.a for s in target.summands)))
    gen_b = max((0, *(-s.b for s in target.summands)))
    candidates = [(1, radius - 1), (c, c), (radius - 1, 1)]
    seen = []
    for a, b in candidates:
        t = Bidegree(max(a, gen_a, 1), max(b, gen_b, 1))
        if t not in seen:
            seen.append(t)
    return seen


def _random_fiber_points(seed: int, count: int, p: int):
    rng = random.Random(f"{seed}:fibers")
    pts = []
    for _ in range(count):
        z = (rng.randrange(p), rng.randrange(p))
        while z == (0, 0):
            z = (rng.randrange(p), rng.randrange(p))
        w = (rng.randrange(p), rng.randrange(p))
        while w == (0, 0):
            w = (rng.randrange(p), rng.randrange(p))
        pts.append((z[0], z[1], w[0], w[1]))
    return pts


def certify_surjective(g: SheafMap, config: CertifyConfig = CertifyConfig()) -> SurjectivityCertificate:
    """Certify that g is surjective as a map of bundles.

    Stages: (i) shape screens -- a target wider than the source can never be
    a quotient, and a square map whose total source and target degrees
    differ has a nonconstant determinant, which must vanish somewhere;
    (ii) fiber ranks at random prime-field points, any drop failing the
    certificate; (iii) exact cokernels of the induced section maps at the
    certification twists, whose collective vanishing upgrades the verdict
    from ``probable`` to ``certified``.
    """
    n_tgt = len(g.target)
    n_src = len(g.source)
    if n_tgt == 0:
        return SurjectivityCertificate((), (), "certified", "empty target")
    if n_src < n_tgt:
        return SurjectivityCertificate(
            (), (), "failed", "target rank exceeds source rank"
        )
    if n_src == n_tgt:
        src_deg = (
            sum(s.a for s in g.source.summands),
            sum(s.b for s in g.source.summands),
        )
        tgt_deg = (
            sum(s.a for s in g.target.summands),
            sum(s.b for s in g.target.summands),
        )
        if src_deg != tgt_deg:
            return SurjectivityCertificate(
                (),
                (),
                "failed",
                "square map with nonconstant determinant degree "
                f"{tgt_deg[0] - src_deg[0], tgt_deg[1] - src_deg[1]}",
            )
    p = config.prime
    fiber_checks = []
    fibers_ok = True
    for pt in _random_fiber_points(config.seed, config.fiber_samples, p):
        rk = rank(g.eval_modp(pt, p))
        fiber_checks.append((pt, rk))
        if rk < n_tgt:
            fibers_ok = False
    radius = config.window_radius if config.window_radius is not None else n_tgt + 2
    window_checks = []
    window_ok = True
    for t in _certification_twists(radius, g.target):
        mat = induced_map(g, 0, t).matrix
        cok = mat.rows - rank(mat)
        window_checks.append((t.pair(), cok))
        if cok != 0:
            window_ok = False
    if not fibers_ok:
        verdict, detail = "failed", "fiber rank dropped at a sample point"
    elif window_ok:
        verdict, detail = "certified", ""
    else:
        verdict, detail = "probable", "section-level cokernel persists at a check twist"
    return SurjectivityCertificate(
        tuple(fiber_checks), tuple(window_checks), verdict, detail
    )


def certify_injective(f: SheafMap, config: CertifyConfig = CertifyConfig()) -> SurjectivityCertificate:
    """Certify that f is an injective bundle map, via its Serre dual.

    f drops rank at a point exactly where the transposed dual map does, so
    injectivity of f is surjectivity of f.star().
    """
    if len(f.source) == 0:
        return SurjectivityCertificate((), (), "certified", "empty source")
    return certify_surjective(f.star(), config)
