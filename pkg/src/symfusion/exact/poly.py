"""Univariate polynomials with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floating-point coefficients are not allowed")
    return Fraction(x)


class Poly:
    """Immutable polynomial over Q, coefficients stored lowest degree first.

    Integer polynomials are the common case; ``is_integral`` and
    ``primitive`` convert between the two views.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def monomial(cls, deg: int, coeff: Number = 1) -> "Poly":
        return cls([0] * deg + [coeff])

    @classmethod
    def t(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> "Poly":
        out = cls([1])
        for r in roots:
            out = out * cls([-_frac(r), 1])
        return out

    # -- basic accessors -------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    @property
    def lead(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._c)

    def int_coeffs(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError(f"{self} has non-integer coefficients")
        return tuple(int(c) for c in self._c)

    def __getitem__(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def __len__(self) -> int:
        return len(self._c)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = _lift(other)
        n = max(len(self._c), len(other._c))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self._c)

    def __sub__(self, other) -> "Poly":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "Poly":
        return _lift(other) - self

    def __mul__(self, other) -> "Poly":
        other = _lift(other)
        if not self._c or not other._c:
            return Poly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out, base = Poly([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = _lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self._c)
        dq = len(r) - len(other._c)
        if dq < 0:
            return Poly(), self
        q = [Fraction(0)] * (dq + 1)
        lead = other.lead
        for k in range(dq, -1, -1):
            c = r[k + len(other._c) - 1] / lead
            q[k] = c
            if c:
                for j, b in enumerate(other._c):
                    r[k + j] -= c * b
        return Poly(q), Poly(r[: len(other._c) - 1])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __call__(self, x):
        """Horner evaluation; works for Fraction, int, and mpmath/complex values."""
        acc = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def eval_float(self, x):
        acc = 0.0
        for c in reversed(self._c):
            acc = acc * x + float(c)
        return acc

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self._c) if i)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.lead
        return Poly(c / lead for c in self._c)

    def content(self) -> Fraction:
        """Positive rational c with self / c integral and primitive."""
        if self.is_zero():
            return Fraction(0)
        den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in self._c), 1)
        nums = [int(c * den) for c in self._c]
        g = reduce(gcd, (abs(n) for n in nums), 0)
        return Fraction(g, den)

    def primitive(self) -> "Poly":
        """Integer, content-free, positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.lead < 0:
            c = -c
        return Poly(x / c for x in self._c)

    def compose_linear(self, a: Number, b: Number) -> "Poly":
        """p(a*t + b)."""
        lin = Poly([b, a])
        acc = Poly()
        for c in reversed(self._c):
            acc = acc * lin + c
        return acc

    def scale_variable(self, s: Number) -> "Poly":
        """p(s*t)."""
        s = _frac(s)
        return Poly(c * s**i for i, c in enumerate(self._c))

    def sign_at(self, x: Fraction) -> int:
        v = self(x)
        return (v > 0) - (v < 0)

    def cauchy_bound(self) -> int:
        """Integer B with every complex root strictly inside |z| < B."""
        if self.degree < 1:
            return 1
        lead = abs(self.lead)
        m = max(abs(c) / lead for c in self._c[:-1])
        return int(m) + 2

    # -- gcd & squarefree -------------------------------------------------
    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, _lift(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def is_squarefree(self) -> bool:
        if self.degree < 1:
            return True
        return self.gcd(self.derivative()).degree == 0

    def squarefree_part(self) -> "Poly":
        if self.degree < 1:
            return self.monic()
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def squarefree_decomposition(self) -> list[tuple["Poly", int]]:
        """Yun's algorithm: [(f_i, i)] with self = lead * prod f_i^i, f_i monic squarefree."""
        if self.degree < 1:
            return []
        f = self.monic()
        out = []
        a = f.gcd(f.derivative())
        b = f // a
        c = f.derivative() // a
        d = c - b.derivative()
        i = 1
        while b.degree > 0:
            g = b.gcd(d)
            if g.degree > 0:
                out.append((g, i))
            b = b // g
            c = d // g
            d = c - b.derivative()
            i += 1
        return out

    def rational_roots(self) -> list[Fraction]:
        """All distinct rational roots, ascending (rational root theorem)."""
        if self.is_zero():
            raise ValueError("zero polynomial has every root")
        f = self.primitive()
        roots = set()
        # strip t^k
        c = list(f.int_coeffs())
        while c and c[0] == 0:
            roots.add(Fraction(0))
            c.pop(0)
        if len(c) <= 1:
            return sorted(roots)
        g = Poly(c)
        for num in _divisors(abs(c[0])):
            for den in _divisors(abs(c[-1])):
                for s in (1, -1):
                    r = Fraction(s * num, den)
                    if r not in roots and g(r) == 0:
                        roots.add(r)
        return sorted(roots)

    # -- display ----------------------------------------------------------
    def to_str(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self._c]})"


def _lift(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly([x])


def _divisors(n: int) -> list[int]:
    if n == 0:
        return [0]
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def resultant(a: Poly, b: Poly) -> Fraction:
    """Res(a, b) by the Euclidean recurrence over Q."""
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    if b.degree == 0:
        return b.lead ** a.degree
    r = a % b
    if r.is_zero():
        return Fraction(0)
    sign = -1 if (a.degree * b.degree) % 2 else 1
    return sign * b.lead ** (a.degree - r.degree) * resultant(b, r)


def discriminant(f: Poly) -> Fraction:
    n = f.degree
    if n < 1:
        raise ValueError("discriminant of a constant")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lead


def poly_product(polys: Sequence[Poly]) -> Poly:
    return reduce(lambda a, b: a * b, polys, Poly([1]))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
