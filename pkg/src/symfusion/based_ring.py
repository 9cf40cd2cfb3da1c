"""Commutative based rings: axioms, multiplication, Frobenius-Perron data, endomorphisms."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence, Union

import numpy as np

from .exact import (
    Interval,
    Poly,
    RealRootInterval,
    char_poly,
    factor_rational_poly,
    int_det,
    inverse,
    perron_root,
    rank,
    root_minimal_polynomial,
)

NOT_INVERTIBLE = "not invertible"
EXCEEDS_MAX = "exceeds max"

_INT64_SAFE = 2**62


class RingMismatch(ValueError):
    pass


class NeedsLargerPool(RuntimeError):
    pass


class NonIntegralRing(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BasedRing:
    """Based ring with basis ``labels``; ``N[i, j, k]`` is the coefficient of b_k in b_i * b_j."""

    labels: tuple[str, ...]
    unit: int
    dual: tuple[int, ...]
    N: np.ndarray
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dual", tuple(int(d) for d in self.dual))
        object.__setattr__(self, "N", _frozen(self.N))
        n = len(self.labels)
        if self.N.shape != (n, n, n):
            raise ValueError(f"structure constants have shape {self.N.shape}, expected {(n, n, n)}")
        if len(self.dual) != n or not 0 <= self.unit < n:
            raise ValueError("dual/unit do not match the rank")

    @classmethod
    def from_products(cls, labels: Sequence[str], products: dict, dual=None, unit: int = 0, name=""):
        """Build from ``{(i, j): {k: mult}}`` given for i <= j (commutativity fills the rest)."""
        n = len(labels)
        N = np.zeros((n, n, n), dtype=np.int64)
        for i in range(n):
            N[unit, i, i] = N[i, unit, i] = 1
        for (i, j), out in products.items():
            for k, c in out.items():
                N[i, j, k] = N[j, i, k] = c
        return cls(tuple(labels), unit, tuple(dual if dual is not None else range(n)), N, name)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: Union[str, int]) -> int:
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.rank:
                raise IndexError(f"basis index {label} out of range for rank {self.rank}")
            return int(label)
        return self.labels.index(label)

    def basis(self, i: Union[str, int]) -> "RingElement":
        i = self.index(i)
        return RingElement(self, tuple(int(a == i) for a in range(self.rank)))

    def element(self, coeffs: Union[Sequence[int], dict]) -> "RingElement":
        if isinstance(coeffs, dict):
            v = [0] * self.rank
            for k, c in coeffs.items():
                v[self.index(k)] += int(c)
            coeffs = v
        return RingElement(self, tuple(int(c) for c in coeffs))

    def one(self) -> "RingElement":
        return self.basis(self.unit)

    def zero(self) -> "RingElement":
        return RingElement(self, (0,) * self.rank)

    def self_dual(self) -> list[int]:
        return [i for i in range(self.rank) if self.dual[i] == i]

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.N, self.N.transpose(1, 0, 2)))

    def same_table(self, other: "BasedRing") -> bool:
        return (
            self.rank == other.rank
            and self.unit == other.unit
            and self.dual == other.dual
            and bool(np.array_equal(self.N, other.N))
        )

    def relabel(self, perm: Sequence[int]) -> "BasedRing":
        """Ring with old basis element i moved to position perm[i]."""
        n = self.rank
        inv = [0] * n
        for i, j in enumerate(perm):
            inv[j] = i
        N = self.N[np.ix_(inv, inv, inv)]
        labels = tuple(self.labels[inv[j]] for j in range(n))
        dual = tuple(perm[self.dual[inv[j]]] for j in range(n))
        return BasedRing(labels, perm[self.unit], dual, N, self.name)

    def __repr__(self) -> str:
        return f"BasedRing({self.name or 'unnamed'}, rank={self.rank})"

    # -- serialization -----------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "rank": self.rank,
            "labels": list(self.labels),
            "unit": self.unit,
            "dual": list(self.dual),
            "N": self.N.tolist(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict, name: str = "") -> "BasedRing":
        return cls(tuple(obj["labels"]), int(obj["unit"]), tuple(obj["dual"]), np.array(obj["N"]), name)

    @classmethod
    def loads(cls, text: str, name: str = "") -> "BasedRing":
        return cls.from_json_obj(json.loads(text), name)


@dataclass(frozen=True, eq=False)
class RingElement:
    ring: BasedRing
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ring.rank:
            raise ValueError(f"element of length {len(self.coeffs)} in a rank-{self.ring.rank} ring")

    def _check(self, other: "RingElement"):
        if other.ring is not self.ring and not other.ring.same_table(self.ring):
            raise RingMismatch("elements live in different rings")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> "RingElement":
        if isinstance(other, int):
            return RingElement(self.ring, tuple(other * a for a in self.coeffs))
        return multiply(self, other)

    def __rmul__(self, other) -> "RingElement":
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "RingElement":
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, RingElement) and self.coeffs == other.coeffs and (
            other.ring is self.ring or other.ring.same_table(self.ring)
        )

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __getitem__(self, label) -> int:
        return self.coeffs[self.ring.index(label)]

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def dual(self) -> "RingElement":
        v = [0] * self.ring.rank
        for i, c in enumerate(self.coeffs):
            v[self.ring.dual[i]] += c
        return RingElement(self.ring, tuple(v))

    def as_dict(self) -> dict[str, int]:
        return {self.ring.labels[i]: c for i, c in enumerate(self.coeffs) if c}

    def __str__(self) -> str:
        return format_combination(self.coeffs, self.ring.labels)

    __repr__ = __str__


def format_combination(coeffs: Sequence, labels: Sequence[str]) -> str:
    parts = []
    for c, lab in zip(coeffs, labels):
        if c == 0:
            continue
        mag = abs(c)
        if lab == "1":
            body = str(mag)
        elif lab[:1].isdigit():
            body = lab if mag == 1 else f"{mag}*{lab}"
        else:
            body = lab if mag == 1 else f"{mag}{lab}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def multiply(a: RingElement, b: RingElement) -> RingElement:
    a._check(b)
    r = a.ring
    N = r.N
    bound = max(map(abs, a.coeffs), default=0) * max(map(abs, b.coeffs), default=0)
    if bound * int(N.max(initial=0)) * r.rank * r.rank < _INT64_SAFE:
        va = np.array(a.coeffs, dtype=np.int64)
        vb = np.array(b.coeffs, dtype=np.int64)
        out = np.einsum("i,j,ijk->k", va, vb, N)
        return RingElement(r, tuple(int(x) for x in out))
    out = [0] * r.rank
    for i, x in enumerate(a.coeffs):
        if x == 0:
            continue
        for j, y in enumerate(b.coeffs):
            if y == 0:
                continue
            xy = x * y
            for k in np.nonzero(N[i, j])[0]:
                out[k] += xy * int(N[i, j, k])
    return RingElement(r, tuple(out))


# -- axioms -------------------------------------------------------------


@dataclass(frozen=True)
class AxiomVerdict:
    ok: bool
    axiom: Optional[str] = None
    witness: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "axiom": self.axiom, "witness": list(self.witness) if self.witness else None}


def verify_axioms(r: BasedRing) -> AxiomVerdict:
    N, n, u = r.N, r.rank, r.unit
    if (N < 0).any():
        idx = tuple(int(x) for x in np.argwhere(N < 0)[0])
        return AxiomVerdict(False, "nonnegativity", idx)
    if sorted(r.dual) != list(range(n)) or any(r.dual[r.dual[i]] != i for i in range(n)):
        return AxiomVerdict(False, "duality involution", tuple(r.dual))
    eye = np.eye(n, dtype=np.int64)
    if not np.array_equal(N[u], eye):
        j, k = (int(x) for x in np.argwhere(N[u] != eye)[0])
        return AxiomVerdict(False, "unit law (left)", (u, j, k))
    if not np.array_equal(N[:, u, :], eye):
        j, k = (int(x) for x in np.argwhere(N[:, u, :] != eye)[0])
        return AxiomVerdict(False, "unit law (right)", (j, u, k))
    if not r.is_commutative():
        i, j, k = (int(x) for x in np.argwhere(N != N.transpose(1, 0, 2))[0])
        return AxiomVerdict(False, "commutativity", (i, j, k))
    expect = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        expect[i, r.dual[i]] = 1
    if not np.array_equal(N[:, :, u], expect):
        i, j = (int(x) for x in np.argwhere(N[:, :, u] != expect)[0])
        return AxiomVerdict(False, "duality axiom", (i, j, u))
    d = list(r.dual)
    dualized = N[np.ix_(d, d, d)].transpose(1, 0, 2)
    if not np.array_equal(N, dualized):
        i, j, k = (int(x) for x in np.argwhere(N != dualized)[0])
        return AxiomVerdict(False, "dual compatibility", (i, j, k))
    # (b_i b_j) b_k == b_i (b_j b_k)
    left = np.einsum("ijm,mkl->ijkl", N, N)
    right = np.einsum("jkm,iml->ijkl", N, N)
    if not np.array_equal(left, right):
        w = tuple(int(x) for x in np.argwhere(left != right)[0])
        return AxiomVerdict(False, "associativity", w)
    return AxiomVerdict(True)


def fusion_matrix(r: BasedRing, i) -> np.ndarray:
    """Matrix of left multiplication by b_i: entry [k, j] = N[i, j, k]."""
    i = r.index(i)
    return np.array(r.N[i].T)


def element_matrix(x: RingElement) -> np.ndarray:
    """Matrix of left multiplication by x (object dtype, exact)."""
    r = x.ring
    m = np.zeros((r.rank, r.rank), dtype=object)
    for i, c in enumerate(x.coeffs):
        if c:
            m = m + c * r.N[i].T.astype(object)
    return m


# -- Frobenius-Perron -----------------------------------------------------


def fpdim(r: BasedRing, i) -> RealRootInterval:
    return perron_root(fusion_matrix(r, i))


def fpdims(r: BasedRing) -> list[RealRootInterval]:
    return [fpdim(r, i) for i in range(r.rank)]


@dataclass(frozen=True)
class TotalDimension:
    """Global FP dimension: sum of squares of basis FP dimensions.

    ``perron`` is the Perron root of the element sum_i b_i b_i*, whose FP
    dimension is the same number; ``from_squares`` is the interval sum.
    """

    perron: RealRootInterval
    from_squares: Interval

    @property
    def exact(self) -> Optional[Fraction]:
        return self.perron.exact

    def __float__(self) -> float:
        return float(self.perron)

    def minimal_polynomial(self) -> Poly:
        return root_minimal_polynomial(self.perron)

    def closed_form(self) -> str:
        return algebraic_closed_form(self.perron)


def algebraic_closed_form(r: RealRootInterval) -> str:
    """Exact value as a string: rationals and quadratic irrationals in radicals, else the minimal polynomial."""
    if r.exact is not None:
        return str(r.exact)
    f = root_minimal_polynomial(r)
    if f.degree != 2:
        return f"root of {f} near {float(r):.12g}"
    c, b, a = (int(x) for x in f.coeffs)
    D = b * b - 4 * a * c
    s, rad = 1, D
    q = 2
    while q * q <= rad:
        while rad % (q * q) == 0:
            rad //= q * q
            s *= q
        q += 1
    sign = 1 if float(r) > -b / (2 * a) else -1
    # root = (-b + sign * s * sqrt(rad)) / (2a), reduced by the common factor
    from math import gcd

    g = gcd(gcd(abs(b), s), 2 * a)
    num, coef, den = -b // g, s // g, 2 * a // g
    surd = f"sqrt({rad})" if coef == 1 else f"{coef}*sqrt({rad})"
    op = "+" if sign > 0 else "-"
    head = f"{num} {op} {surd}" if num else (surd if sign > 0 else f"-{surd}")
    if den == 1:
        return head
    return f"({head})/{den}" if num else f"{head}/{den}"


def casimir(r: BasedRing) -> RingElement:
    out = r.zero()
    for i in range(r.rank):
        out = out + r.basis(i) * r.basis(r.dual[i])
    return out


def fpdim_total(r: BasedRing, width=Fraction(1, 10**30)) -> TotalDimension:
    total = Interval(Fraction(0), Fraction(0))
    for d in fpdims(r):
        d = d.refine(width)
        iv = d.interval
        total = total + iv * iv
    root = perron_root(element_matrix(casimir(r)).astype(int)).refine(width)
    if not total.overlaps(root.interval):
        raise ArithmeticError("total dimension: Perron and sum-of-squares routes disagree")
    return TotalDimension(root, total)


def is_integral(r: BasedRing) -> bool:
    return all(d.is_integer for d in fpdims(r))


def global_dim_mod_p(r: BasedRing, p: int) -> int:
    dims = fpdims(r)
    if not all(d.is_integer for d in dims):
        raise NonIntegralRing("global dimension mod p is only defined for integral rings")
    return int(sum(d.exact**2 for d in dims)) % p


def _coefficient_pool(n: int, max_coeff: int):
    """Deterministic pool: tuples ordered by coefficient sum, then lexicographically."""
    tuples = [c for c in product(range(max_coeff + 1), repeat=n) if any(c)]
    tuples.sort(key=lambda c: (sum(c), c))
    return tuples


def separating_element(r: BasedRing, max_coeff: int = 3) -> tuple[tuple[int, ...], Poly]:
    """First pool element whose multiplication matrix has squarefree characteristic polynomial."""
    for c in _coefficient_pool(r.rank, max_coeff):
        cp = char_poly(element_matrix(r.element(c)))
        if cp.is_squarefree():
            return c, cp
    raise NeedsLargerPool(f"no separating element with coefficients <= {max_coeff}")


def decomposition_type(r: BasedRing, max_coeff: int = 3) -> tuple[int, ...]:
    """Degrees of the simple factors of K ⊗ Q, ascending."""
    _, cp = separating_element(r, max_coeff)
    return tuple(sorted(f.degree for f in factor_rational_poly(cp, max_degree=max(12, r.rank))))


# -- endomorphisms ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RingEndomorphism:
    """Additive endomorphism given by an integer matrix; column j is the image of b_j."""

    ring: BasedRing
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        n = self.ring.rank
        if len(m) != n or any(len(row) != n for row in m):
            raise ValueError("endomorphism matrix does not match the ring rank")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_images(cls, ring: BasedRing, images: Sequence[RingElement]) -> "RingEndomorphism":
        cols = [x.coeffs for x in images]
        return cls(ring, tuple(zip(*cols)))

    @classmethod
    def identity(cls, ring: BasedRing) -> "RingEndomorphism":
        n = ring.rank
        return cls(ring, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def image(self, j) -> RingElement:
        j = self.ring.index(j)
        return RingElement(self.ring, tuple(row[j] for row in self.matrix))

    def images(self) -> list[RingElement]:
        return [self.image(j) for j in range(self.ring.rank)]

    def __call__(self, x: RingElement) -> RingElement:
        return RingElement(
            self.ring, tuple(sum(a * c for a, c in zip(row, x.coeffs)) for row in self.matrix)
        )

    def _array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=object)

    def __matmul__(self, other: "RingEndomorphism") -> "RingEndomorphism":
        prod_ = self._array().dot(other._array())
        return RingEndomorphism(self.ring, tuple(tuple(int(x) for x in row) for row in prod_))

    def power(self, k: int) -> "RingEndomorphism":
        if k < 0:
            raise ValueError("negative power")
        out, base = RingEndomorphism.identity(self.ring), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return all(x == int(i == j) for i, row in enumerate(self.matrix) for j, x in enumerate(row))

    def __eq__(self, other) -> bool:
        return isinstance(other, RingEndomorphism) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def describe(self) -> dict[str, str]:
        return {self.ring.labels[j]: str(self.image(j)) for j in range(self.ring.rank)}


@dataclass(frozen=True)
class EndoVerdict:
    is_ring_hom: bool
    commutes_with_dual: bool
    fixes_unit: bool
    witness: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.is_ring_hom and self.commutes_with_dual and self.fixes_unit

    def to_json(self) -> dict:
        return {
            "is_ring_hom": self.is_ring_hom,
            "commutes_with_dual": self.commutes_with_dual,
            "fixes_unit": self.fixes_unit,
            "witness": self.witness,
        }


def _hom_defect(f: RingEndomorphism) -> Optional[tuple[int, int]]:
    r = f.ring
    A = np.array(f.matrix, dtype=np.int64)
    if np.abs(A).max(initial=0) ** 2 * int(r.N.max(initial=0)) * r.rank**2 < _INT64_SAFE:
        lhs = np.einsum("ai,bj,abl->ijl", A, A, r.N)
        rhs = np.einsum("ijk,lk->ijl", r.N, A)
        bad = np.argwhere(lhs != rhs)
        return None if len(bad) == 0 else (int(bad[0][0]), int(bad[0][1]))
    imgs = f.images()
    for i in range(r.rank):
        for j in range(i, r.rank):
            if imgs[i] * imgs[j] != f(r.basis(i) * r.basis(j)):
                return (i, j)
    return None


def endo_check(f: RingEndomorphism) -> EndoVerdict:
    r = f.ring
    witness = None
    defect = _hom_defect(f)
    if defect is not None:
        i, j = defect
        witness = f"f({r.labels[i]})*f({r.labels[j]}) != f({r.labels[i]}*{r.labels[j]})"
    dual_ok = all(f.image(r.dual[j]) == f.image(j).dual() for j in range(r.rank))
    if not dual_ok and witness is None:
        j = next(j for j in range(r.rank) if f.image(r.dual[j]) != f.image(j).dual())
        witness = f"f({r.labels[j]}*) != f({r.labels[j]})*"
    unit_ok = f.image(r.unit) == r.one()
    if not unit_ok and witness is None:
        witness = "unit not fixed"
    return EndoVerdict(defect is None, dual_ok, unit_ok, witness)


def is_invertible(f: RingEndomorphism) -> bool:
    """Unimodular with an integral inverse."""
    if abs(int_det(f.matrix)) != 1:
        return False
    inv = inverse(f.matrix)
    return all(x.denominator == 1 for row in inv.rows for x in row)


def endo_order(f: RingEndomorphism, max_n: int = 64) -> Union[int, str]:
    if not is_invertible(f):
        return NOT_INVERTIBLE
    g = f
    for n in range(1, max_n + 1):
        if g.is_identity():
            return n
        g = g @ f
    return EXCEEDS_MAX


def endo_power_relation(f: RingEndomorphism, a: int, b: int) -> bool:
    if a < 0 or b < 0:
        raise ValueError("powers must be nonnegative")
    return f.power(a) == f.power(b)


def image_rank(f: RingEndomorphism) -> int:
    return rank(f.matrix)
