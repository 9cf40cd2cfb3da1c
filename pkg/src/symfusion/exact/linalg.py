"""Exact matrices over Q: characteristic polynomials, rank, kernels, determinants."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from functools import reduce
from typing import Iterable, Sequence

from .poly import Poly


class DimensionError(ValueError):
    pass


class RationalMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("_rows", "shape")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        self._rows = rows
        self.shape = (len(rows), ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "RationalMatrix":
        return cls([[0] * c for _ in range(r)])

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self._rows)) if self._rows else self

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape[1] != other.shape[0]:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._rows))
        return RationalMatrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows]
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix([[c * a for a in r] for r in self._rows])

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        return tuple(sum((a * Fraction(x) for a, x in zip(r, v)), Fraction(0)) for r in self._rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"RationalMatrix([{body}])"


def as_matrix(m) -> RationalMatrix:
    if isinstance(m, RationalMatrix):
        return m
    return RationalMatrix(m.tolist() if hasattr(m, "tolist") else m)


def char_poly(m) -> Poly:
    """det(tI - m), via reduction to upper Hessenberg form over Q."""
    m = as_matrix(m)
    if not m.is_square():
        raise DimensionError(f"characteristic polynomial of a non-square {m.shape} matrix")
    n = m.shape[0]
    if n == 0:
        return Poly([1])
    h = [list(r) for r in m.rows]
    # similarity transforms to Hessenberg form
    for k in range(n - 2):
        piv = next((i for i in range(k + 1, n) if h[i][k] != 0), None)
        if piv is None:
            continue
        if piv != k + 1:
            h[piv], h[k + 1] = h[k + 1], h[piv]
            for row in h:
                row[piv], row[k + 1] = row[k + 1], row[piv]
        pv = h[k + 1][k]
        for i in range(k + 2, n):
            f = h[i][k] / pv
            if f == 0:
                continue
            for j in range(n):
                h[i][j] -= f * h[k + 1][j]
            for row in h:
                row[k + 1] += f * row[i]
    # recurrence on leading principal minors
    t = Poly.t()
    polys = [Poly([1])]
    for k in range(n):
        pk = (t - h[k][k]) * polys[k]
        prod = Fraction(1)
        for i in range(k - 1, -1, -1):
            prod *= h[i + 1][i]
            if prod == 0:
                break
            pk = pk - polys[i] * (prod * h[i][k])
        polys.append(pk)
    return polys[n]


def rref(m) -> tuple[list[list[Fraction]], list[int]]:
    m = as_matrix(m)
    a = [list(r) for r in m.rows]
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def primitive_int_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    v = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def rank_and_kernel(m) -> tuple[int, list[tuple[int, ...]]]:
    """Rank and an integer-primitive basis of the right kernel."""
    m = as_matrix(m)
    a, pivots = rref(m)
    ncols = m.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][f]
        basis.append(primitive_int_vector(v))
    return len(pivots), basis


def rank(m) -> int:
    return len(rref(m)[1])


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m) -> RationalMatrix:
    m = as_matrix(m)
    if not m.is_square():
        raise DimensionError("inverse of a non-square matrix")
    n = m.shape[0]
    aug = RationalMatrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m.rows)])
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return RationalMatrix([row[n:] for row in red])


def solve(m, b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution x of m x = b, or None if inconsistent."""
    m = as_matrix(m)
    aug = RationalMatrix([list(r) + [b[i]] for i, r in enumerate(m.rows)])
    red, pivots = rref(aug)
    ncols = m.shape[1]
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in enumerate(pivots):
        x[pc] = red[row][ncols]
    return tuple(x)
