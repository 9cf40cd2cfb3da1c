"""Arithmetic in Q(z + 1/z), Galois orbit sums, Verlinde embeddings and positivity cones.

Throughout z = exp(2 pi i / p) and b_j denotes z^j + z^-j, j = 1..h with h = (p-1)/2.
The relation 1 + sum_j b_j = 0 makes {1, b_1..b_h} linearly dependent; elements
are compared through the folded vector (a_j - c) and stored in a canonical
representative of that class.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import permutations
from math import cos, pi
from typing import Optional, Sequence, Union

import mpmath
import numpy as np

from .based_ring import RingElement
from .cone import cone_span_dim
from .exact import Poly, UnsupportedDegree, char_poly, discriminant, factor_rational_poly, isolate_real_roots
from .verlinde import (
    adams_verlinde_plus,
    build_verlinde_plus,
    check_prime,
)

Rational = Union[int, Fraction]


def reduce_exponent(e: int, p: int) -> int:
    """Representative of +-e mod p in 0..(p-1)/2."""
    e %= p
    return min(e, p - e)


def _canonical(const: Fraction, coeffs: tuple[Fraction, ...]) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Representative with the fewest nonzero entries, then fewest negatives, then smallest |c|."""
    # shifting (c, a) -> (c - s, a - s) leaves the element unchanged
    shifts = {Fraction(0), const} | set(coeffs)

    def key(s):
        c, a = const - s, [x - s for x in coeffs]
        nonzero = (c != 0) + sum(x != 0 for x in a)
        negatives = (c < 0) + sum(x < 0 for x in a)
        return (nonzero, negatives, abs(c), -c)

    s = min(shifts, key=key)
    return const - s, tuple(x - s for x in coeffs)


class RealCycloElement:
    """Element c + sum_j a_j b_j of Q(z + 1/z)."""

    __slots__ = ("p", "const", "coeffs")

    def __init__(self, p: int, const: Rational = 0, coeffs: Optional[Sequence[Rational]] = None):
        h = (p - 1) // 2
        coeffs = tuple(Fraction(x) for x in (coeffs if coeffs is not None else [0] * h))
        if len(coeffs) != h:
            raise ValueError(f"expected {h} coefficients for p={p}, got {len(coeffs)}")
        c, a = _canonical(Fraction(const), coeffs)
        self.p, self.const, self.coeffs = p, c, a

    @classmethod
    def from_exponents(cls, p: int, terms: dict[int, Rational], const: Rational = 0) -> "RealCycloElement":
        """sum_e terms[e] (z^e + z^-e) + const for arbitrary integer exponents e."""
        h = (p - 1) // 2
        c = Fraction(const)
        a = [Fraction(0)] * h
        for e, x in terms.items():
            r = reduce_exponent(e, p)
            if r == 0:
                c += 2 * Fraction(x)
            else:
                a[r - 1] += Fraction(x)
        return cls(p, c, a)

    @classmethod
    def basis(cls, p: int, j: int) -> "RealCycloElement":
        return cls.from_exponents(p, {j: 1})

    @classmethod
    def constant(cls, p: int, c: Rational) -> "RealCycloElement":
        return cls(p, c)

    @property
    def h(self) -> int:
        return len(self.coeffs)

    def folded(self) -> tuple[Fraction, ...]:
        """Coordinates in the basis b_1..b_h, using 1 = -sum_j b_j."""
        return tuple(a - self.const for a in self.coeffs)

    def is_rational(self) -> bool:
        return len(set(self.folded())) <= 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        f = self.folded()
        return -f[0] if f else self.const

    def _check(self, other: "RealCycloElement"):
        if other.p != self.p:
            raise ValueError("elements of different cyclotomic fields")

    def __add__(self, other) -> "RealCycloElement":
        if not isinstance(other, RealCycloElement):
            return RealCycloElement(self.p, self.const + Fraction(other), self.coeffs)
        self._check(other)
        return RealCycloElement(
            self.p, self.const + other.const, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    __radd__ = __add__

    def __neg__(self) -> "RealCycloElement":
        return RealCycloElement(self.p, -self.const, [-a for a in self.coeffs])

    def __sub__(self, other) -> "RealCycloElement":
        return self + (-other)

    def __rsub__(self, other) -> "RealCycloElement":
        return (-self) + other

    def __mul__(self, other) -> "RealCycloElement":
        if not isinstance(other, RealCycloElement):
            x = Fraction(other)
            return RealCycloElement(self.p, self.const * x, [a * x for a in self.coeffs])
        self._check(other)
        p = self.p
        const = self.const * other.const
        terms: dict[int, Fraction] = {}
        for i, a in enumerate(self.coeffs, 1):
            if a:
                terms[i] = terms.get(i, 0) + a * other.const
        for j, b in enumerate(other.coeffs, 1):
            if b:
                terms[j] = terms.get(j, 0) + b * self.const
        for i, a in enumerate(self.coeffs, 1):
            if not a:
                continue
            for j, b in enumerate(other.coeffs, 1):
                if b:
                    # b_i b_j = b_{i+j} + b_{i-j}
                    terms[i + j] = terms.get(i + j, 0) + a * b
                    terms[i - j] = terms.get(i - j, 0) + a * b
        return RealCycloElement.from_exponents(p, terms, const)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RealCycloElement":
        out = RealCycloElement(self.p, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RealCycloElement(self.p, other)
        return isinstance(other, RealCycloElement) and self.p == other.p and self.folded() == other.folded()

    def __hash__(self) -> int:
        return hash((self.p, self.folded()))

    def galois(self, a: int) -> "RealCycloElement":
        """Image under z -> z^a."""
        if a % self.p == 0:
            raise ValueError("a must be prime to p")
        return RealCycloElement.from_exponents(
            self.p, {a * j: x for j, x in enumerate(self.coeffs, 1) if x}, self.const
        )

    def value(self, embedding: int = 1) -> float:
        """Real value at z = exp(2 pi i * embedding / p)."""
        return float(self.const) + sum(
            float(a) * 2 * cos(2 * pi * embedding * j / self.p) for j, a in enumerate(self.coeffs, 1)
        )

    def mp_value(self, embedding: int = 1):
        return mpmath.mpf(self.const.numerator) / self.const.denominator + mpmath.fsum(
            mpmath.mpf(a.numerator) / a.denominator * 2 * mpmath.cos(2 * mpmath.pi * embedding * j / self.p)
            for j, a in enumerate(self.coeffs, 1)
        )

    def to_json(self) -> dict:
        return {"p": self.p, "const": str(self.const), "coeffs": [str(a) for a in self.coeffs]}

    def __str__(self) -> str:
        parts = []
        if self.const:
            parts.append((self.const, ""))
        for j, a in enumerate(self.coeffs, 1):
            if a:
                parts.append((a, f"b{j}"))
        if not parts:
            return "0"
        out = ""
        for idx, (a, name) in enumerate(parts):
            mag = abs(a)
            body = str(mag) if not name else (name if mag == 1 else f"{mag}*{name}")
            if idx == 0:
                out = ("-" if a < 0 else "") + body
            else:
                out += (" - " if a < 0 else " + ") + body
        return out

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class CycloPair:
    """Pair (u, v) standing for u + eps*v with eps^2 = 1.

    This graded product is the one under which the even simples embed
    multiplicatively; ``split`` gives the two honest field components.
    """

    first: RealCycloElement
    second: RealCycloElement

    def __add__(self, other: "CycloPair") -> "CycloPair":
        return CycloPair(self.first + other.first, self.second + other.second)

    def __sub__(self, other: "CycloPair") -> "CycloPair":
        return CycloPair(self.first - other.first, self.second - other.second)

    def __mul__(self, other) -> "CycloPair":
        if not isinstance(other, CycloPair):
            return CycloPair(self.first * other, self.second * other)
        u1, v1, u2, v2 = self.first, self.second, other.first, other.second
        return CycloPair(u1 * u2 + v1 * v2, u1 * v2 + v1 * u2)

    def split(self) -> tuple[RealCycloElement, RealCycloElement]:
        """(u + v, u - v): a ring isomorphism onto the componentwise product."""
        return self.first + self.second, self.first - self.second

    def __eq__(self, other) -> bool:
        return isinstance(other, CycloPair) and self.first == other.first and self.second == other.second

    def __hash__(self) -> int:
        return hash((self.first, self.second))

    def __str__(self) -> str:
        return f"({self.first}, {self.second})"

    __repr__ = __str__


# -- Galois orbits -------------------------------------------------------------


def primitive_root(p: int) -> int:
    """Smallest generator of (Z/p)^x."""
    phi = p - 1
    primes = [q for q in range(2, phi + 1) if phi % q == 0 and all(q % r for r in range(2, q))]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in primes):
            return g
    raise ValueError(f"no primitive root for {p}")


@dataclass(frozen=True)
class GaloisOrbitData:
    p: int
    m: int
    k: int
    subgroup: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]
    sums: tuple[RealCycloElement, ...]
    parity: str

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "k": self.k,
            "parity": self.parity,
            "subgroup": list(self.subgroup),
            "orbits": [list(o) for o in self.orbits],
            "sums": [str(x) for x in self.sums],
        }


def galois_orbits(p: int, m: int, parity: str = "odd") -> GaloisOrbitData:
    """Orbits of the order-m subgroup H_m of (Z/p)^x/{+-1} on exponents 1..(p-1)/2.

    ``parity="odd"`` puts the orbit of exponent 1 last, ``"even"`` puts it first.
    """
    p = check_prime(p)
    h = (p - 1) // 2
    if m < 1 or h % m:
        raise ValueError(f"m={m} does not divide (p-1)/2={h}")
    if parity not in ("odd", "even"):
        raise ValueError("parity must be 'odd' or 'even'")
    k = h // m
    g = primitive_root(p)
    gen = pow(g, k, p)
    H = sorted({reduce_exponent(pow(gen, i, p), p) for i in range(m)})
    orbits, seen = [], set()
    for j in range(1, h + 1):
        if j in seen:
            continue
        orb = tuple(sorted({reduce_exponent(j * x, p) for x in H}))
        seen.update(orb)
        orbits.append(orb)
    one = next(o for o in orbits if 1 in o)
    rest = [o for o in orbits if o is not one]
    orbits = rest + [one] if parity == "odd" else [one] + rest
    sums = tuple(RealCycloElement.from_exponents(p, {j: 1 for j in o}) for o in orbits)
    return GaloisOrbitData(p, m, k, tuple(H), tuple(orbits), sums, parity)


# -- embeddings ------------------------------------------------------------------


def _odd_image(p: int, t: int) -> RealCycloElement:
    j = (t - 1) // 2
    return RealCycloElement.from_exponents(p, {2 * l: 1 for l in range(1, j + 1)}, 1)


def _even_image(p: int, t: int) -> RealCycloElement:
    j = t // 2
    return RealCycloElement.from_exponents(p, {2 * l - 1: 1 for l in range(1, j + 1)})


def _label_coeffs(p: int, x: Union[RingElement, dict]) -> dict[int, int]:
    if isinstance(x, dict):
        return dict(x)
    name = x.ring.labels
    return {int(name[i][1:]): c for i, c in enumerate(x.coeffs) if c}


def embed_plus(p: int, x: Union[RingElement, dict]) -> RealCycloElement:
    """Image of an element of K(Ver_p^+): L_{2j+1} -> 1 + sum_{l<=j} b_{2l}."""
    terms = _label_coeffs(p, x)
    if any(t % 2 == 0 for t, c in terms.items() if c):
        raise ValueError("embed_plus takes elements supported on odd labels")
    out = RealCycloElement(p)
    for t, c in terms.items():
        out = out + _odd_image(p, t) * c
    return out


def embed_full(p: int, x: Union[RingElement, dict]) -> CycloPair:
    """Odd labels into the first slot as in ``embed_plus``; L_{2j} -> (0, sum_{l<=j} b_{2l-1})."""
    first, second = RealCycloElement(p), RealCycloElement(p)
    for t, c in _label_coeffs(p, x).items():
        if t % 2:
            first = first + _odd_image(p, t) * c
        else:
            second = second + _even_image(p, t) * c
    return CycloPair(first, second)


def squaring_endomorphism(p: int):
    """b_j -> b_{2j}, i.e. the Galois automorphism z -> z^2."""
    return lambda x: x.galois(2)


def verify_adams_embedding_commutes(p: int) -> dict:
    p = check_prime(p)
    Vp = build_verlinde_plus(p)
    psi = adams_verlinde_plus(p)
    sq = squaring_endomorphism(p)
    bad = []
    for t in Vp.indices:
        lhs = embed_plus(p, psi(Vp.L(t)))
        rhs = sq(embed_plus(p, Vp.L(t)))
        if lhs != rhs:
            bad.append(t)
    return {"p": p, "ok": not bad, "failures": bad}


# -- L-expansions and positivity cones -----------------------------------------------


def l_expansion_of_orbit_sums(p: int, m: int, parity: str = "odd") -> list[dict[int, int]]:
    """Each orbit sum as a signed combination of simple labels of the given parity."""
    data = galois_orbits(p, m, parity)
    out = []
    for orb in data.orbits:
        vec: Counter = Counter()
        for j in orb:
            if parity == "odd":
                t = j if j % 2 == 0 else p - j
                if t == p - 1:
                    vec[p - 2] -= 1
                else:
                    vec[t + 1] += 1
                    vec[t - 1] -= 1
            else:
                t = j if j % 2 == 1 else p - j
                if t == 1:
                    vec[2] += 1
                else:
                    vec[t + 1] += 1
                    vec[t - 1] -= 1
        out.append({t: c for t, c in sorted(vec.items()) if c})
    return out


def parity_labels(p: int, parity: str) -> list[int]:
    return list(range(1, p, 2)) if parity == "odd" else list(range(2, p, 2))


def positivity_constraints(p: int, m: int, parity: str = "odd") -> list[list[int]]:
    """Rows indexed by labels, columns by orbit sums: lambda in the cone iff rows . lambda >= 0."""
    exps = l_expansion_of_orbit_sums(p, m, parity)
    return [[e.get(t, 0) for e in exps] for t in parity_labels(p, parity)]


def positivity_cone_dim(p: int, m: int, parity: str = "odd", max_rays: int = 20000) -> int:
    """Dimension of the span of subfield elements with a nonnegative label expansion."""
    return cone_span_dim(positivity_constraints(p, m, parity), max_rays)


def verify_rank_bound(p: int, max_rays: int = 20000) -> dict:
    p = check_prime(p)
    h = (p - 1) // 2
    entries = []
    ok = True
    for m in sorted(d for d in range(1, h + 1) if h % d == 0):
        k = h // m
        if k == 1:
            entries.append({"k": k, "m": m, "status": "out of scope (categorical dichotomy)"})
            continue
        row = {"k": k, "m": m}
        for parity in ("odd", "even"):
            dim = positivity_cone_dim(p, m, parity, max_rays)
            signs = all(
                any(c > 0 for c in e.values()) and any(c < 0 for c in e.values())
                for e in l_expansion_of_orbit_sums(p, m, parity)
            )
            row[parity] = {"cone_dim": dim, "mixed_signs": signs}
            if k < h:
                ok &= dim < k and signs
        row["status"] = "checked" if k < h else "full field (sanity)"
        entries.append(row)
    return {"p": p, "ok": ok, "subfields": entries}


# -- roots of small polynomials in Q(z + 1/z) -------------------------------------


FACTOR_CAP_NORM = 16


@lru_cache(maxsize=None)
def period_minimal_polynomial(p: int, m: int) -> Poly:
    """prod_i (t - x_i) over the orbit sums of H_m: the minimal polynomial of any x_i."""
    data = galois_orbits(p, m, "odd")
    # polynomial with RealCycloElement coefficients, lowest degree first
    coeffs = [RealCycloElement(p, 1)]
    for x in data.sums:
        nxt = [RealCycloElement(p) for _ in range(len(coeffs) + 1)]
        for i, c in enumerate(coeffs):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * x
        coeffs = nxt
    return Poly([c.rational_value() for c in coeffs])


def _companion(f: Poly) -> np.ndarray:
    f = f.monic()
    d = f.degree
    C = np.zeros((d, d), dtype=object)
    C[:] = Fraction(0)
    for i in range(1, d):
        C[i, i - 1] = Fraction(1)
    for i in range(d):
        C[i, d - 1] = -f[i]
    return C


def _norm_poly(f: Poly, g: Poly, s: int) -> Poly:
    """Polynomial whose roots are beta + s*theta over roots beta of f and theta of g."""
    Cf, Cg = _companion(f), _companion(g)
    If = np.eye(f.degree, dtype=object) * Fraction(1)
    Ig = np.eye(g.degree, dtype=object) * Fraction(1)
    M = np.kron(Cf, Ig) + s * np.kron(If, Cg)
    return char_poly(M)


def _root_in_subfield(f: Poly, data: GaloisOrbitData) -> Optional[RealCycloElement]:
    """A root of the irreducible f in the span of the orbit sums, or None."""
    d = f.degree
    g = period_minimal_polynomial(data.p, data.m)
    decided = None
    for s in range(1, 20):
        N = _norm_poly(f, g, s)
        if N.is_squarefree():
            facs = factor_rational_poly(N, max_degree=FACTOR_CAP_NORM)
            decided = any(q.degree == d for q in facs)
            break
    if decided is None:
        raise ArithmeticError("no squarefree norm found for small shifts")
    witness = _reconstruct_root(f, data) if decided else None
    if decided and witness is None:
        raise ArithmeticError(f"norm test says {f} has a root in the subfield but none was reconstructed")
    return witness


def _reconstruct_root(f: Poly, data: GaloisOrbitData) -> Optional[RealCycloElement]:
    """Solve lead(f) * rho = sum_i c_i x_i with integer c_i against the real roots of f."""
    p, d = data.p, f.degree
    lead = f.primitive().lead
    g = primitive_root(p)
    with mpmath.workdps(60):
        reps = [pow(g, j, p) for j in range(d)]
        X = mpmath.matrix([[x.mp_value(a) for x in data.sums] for a in reps])
        roots = [mpmath.mpf(float(r)) for r in isolate_real_roots(f)]
        roots = [mpmath.findroot(lambda t: f(t), r) for r in roots]
        if len(roots) != d:
            return None
        for perm in permutations(roots):
            c = mpmath.lu_solve(X, mpmath.matrix([lead * r for r in perm]))
            ints = [int(mpmath.nint(ci)) for ci in c]
            if any(abs(ci - n) > mpmath.mpf(10) ** -30 for ci, n in zip(c, ints)):
                continue
            rho = RealCycloElement(p)
            for n, x in zip(ints, data.sums):
                rho = rho + x * n
            rho = rho * Fraction(1, int(lead))
            if _eval(f, rho) == 0:
                return rho
    return None


def _eval(f: Poly, x: RealCycloElement) -> RealCycloElement:
    acc = RealCycloElement(x.p)
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class RootCertificate:
    has_root: bool
    witness: Optional[RealCycloElement] = None
    factor: Optional[Poly] = None

    def to_json(self) -> dict:
        return {
            "has_root": self.has_root,
            "witness": str(self.witness) if self.witness is not None else None,
            "factor": str(self.factor) if self.factor is not None else None,
        }


def ramification_excludes(f: Poly, p: int) -> bool:
    """True when disc forbids Q(root of f) from being the degree-d subfield of Q(z + 1/z).

    That subfield is ramified only at p, with discriminant p^(d-1), and the
    discriminant of the monic integral polynomial of lead(f)*root is that
    field discriminant times a square.
    """
    f = f.primitive()
    d, a = f.degree, f.lead
    monic = Poly([c * a ** (d - 1 - i) for i, c in enumerate(f.coeffs[:-1])] + [1])
    return discriminant(monic) % p ** (d - 1) != 0


def has_root_in_real_cyclotomic(
    P: Poly, p: int, max_degree: int = 4, prefilter: bool = True
) -> RootCertificate:
    """Decide whether P has a root in Q(z + 1/z); the witness satisfies P(witness) = 0 exactly.

    ``prefilter`` enables the discriminant shortcut for negative answers; with it
    off every factor goes through the norm factorization.
    """
    p = check_prime(p)
    if P.is_zero():
        raise ValueError("zero polynomial")
    if P.degree > max_degree:
        raise UnsupportedDegree(f"degree {P.degree} exceeds the cap {max_degree}")
    return _has_root_cached(P, p, prefilter)


@lru_cache(maxsize=4096)
def _has_root_cached(P: Poly, p: int, prefilter: bool) -> RootCertificate:
    h = (p - 1) // 2
    for f in factor_rational_poly(P):
        d = f.degree
        if d == 1:
            return RootCertificate(True, RealCycloElement(p, -f[0] / f[1]), f)
        if h % d:
            continue
        if prefilter and ramification_excludes(f, p):
            continue
        data = galois_orbits(p, h // d, "odd")
        w = _root_in_subfield(f, data)
        if w is not None:
            return RootCertificate(True, w, f)
    return RootCertificate(False)
