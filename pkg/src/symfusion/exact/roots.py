"""Certified real root isolation (Sturm sequences) and Perron roots."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .linalg import as_matrix, char_poly
from .poly import Poly


class InvalidInput(ValueError):
    pass


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)
    return seq


def sign_variations(seq: list[Poly], x: Fraction) -> int:
    signs = [s for s in (q.sign_at(x) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq: list[Poly], lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in (lo, hi] of the squarefree head of ``seq``."""
    return sign_variations(seq, lo) - sign_variations(seq, hi)


@dataclass(frozen=True)
class Interval:
    """Closed rational interval, used for certified arithmetic on root enclosures."""

    lo: Fraction
    hi: Fraction

    def __add__(self, other) -> "Interval":
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __mul__(self, other) -> "Interval":
        other = _as_interval(other)
        prods = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return Interval(min(prods), max(prods))

    __rmul__ = __mul__

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, RealRootInterval):
        return x.interval
    x = Fraction(x)
    return Interval(x, x)


@dataclass(frozen=True)
class RealRootInterval:
    """An interval [lo, hi] holding exactly one real root of ``poly``.

    ``poly`` is squarefree. When the root is rational, ``lo == hi == exact``.
    """

    poly: Poly
    lo: Fraction
    hi: Fraction
    exact: Optional[Fraction] = None

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def is_integer(self) -> bool:
        return self.exact is not None and self.exact.denominator == 1

    def refine(self, width) -> "RealRootInterval":
        """Bisect until the interval is no wider than ``width``."""
        width = Fraction(width)
        if self.exact is not None or self.width <= width:
            return self
        lo, hi = self.lo, self.hi
        slo = self.poly.sign_at(lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            s = self.poly.sign_at(mid)
            if s == 0:
                return RealRootInterval(self.poly, mid, mid, mid)
            if s == slo:
                lo = mid
            else:
                hi = mid
        return RealRootInterval(self.poly, lo, hi)

    def __float__(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return float(self.refine(Fraction(1, 2**60)).interval)

    def __str__(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        return f"root of {self.poly} in [{self.lo}, {self.hi}] (~{float(self):.6f})"


def isolate_real_roots(p: Poly) -> list[RealRootInterval]:
    """Disjoint isolating intervals for the distinct real roots of ``p``, ascending."""
    if p.is_zero():
        raise InvalidInput("cannot isolate roots of the zero polynomial")
    if p.degree < 1:
        return []
    sq = p.squarefree_part()
    out = []
    rest = sq
    for r in sq.rational_roots():
        lin = Poly([-r, 1])
        out.append(RealRootInterval(lin, r, r, r))
        rest = rest // lin
    if rest.degree >= 1:
        # rest has no rational roots, so rational bisection points are never roots
        seq = sturm_sequence(rest)
        b = Fraction(rest.cauchy_bound())
        stack = [(-b, b)]
        while stack:
            lo, hi = stack.pop()
            n = count_roots(seq, lo, hi)
            if n == 0:
                continue
            if n == 1:
                out.append(RealRootInterval(rest, lo, hi))
                continue
            mid = (lo + hi) / 2
            stack.append((lo, mid))
            stack.append((mid, hi))
    # tighten irrational intervals so none touches an exact root or another interval
    out.sort(key=lambda r: (r.lo, r.hi))
    out = _separate(out)
    return out


def _separate(roots: list[RealRootInterval]) -> list[RealRootInterval]:
    changed = True
    while changed:
        changed = False
        roots.sort(key=lambda r: (r.lo, r.hi))
        for i in range(len(roots) - 1):
            a, b = roots[i], roots[i + 1]
            if a.hi >= b.lo:
                changed = True
                if not a.is_exact:
                    roots[i] = a.refine(a.width / 4)
                if not b.is_exact:
                    roots[i + 1] = b.refine(b.width / 4)
    return roots


def perron_root(m) -> RealRootInterval:
    """Largest real eigenvalue of a nonnegative square matrix, certified."""
    m = as_matrix(m)
    if not m.is_square():
        raise InvalidInput("Perron root needs a square matrix")
    if any(x < 0 for row in m.rows for x in row):
        raise InvalidInput("Perron root needs a nonnegative matrix")
    roots = isolate_real_roots(char_poly(m))
    if not roots:
        raise InvalidInput("matrix has no real eigenvalue")
    return roots[-1]


def root_minimal_polynomial(r: RealRootInterval) -> Poly:
    """Minimal polynomial (primitive integer form) of the root held by ``r``."""
    from .factor import factor_rational_poly

    if r.exact is not None:
        return Poly([-r.exact, 1]).primitive()
    for f in factor_rational_poly(r.poly, max_degree=max(12, r.poly.degree)):
        if f.degree < 1:
            continue
        # the root is simple in r.poly, so exactly one factor changes sign on the interval
        if f.sign_at(r.lo) * f.sign_at(r.hi) < 0:
            return f
    raise ArithmeticError(f"no factor of {r.poly} vanishes in [{r.lo}, {r.hi}]")
