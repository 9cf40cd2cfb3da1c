"""Parametrized rank-3 and rank-4 based rings and their Diophantine enumeration."""
from __future__ import annotations

from dataclasses import astuple, dataclass
from itertools import product
from math import isqrt


from ..based_ring import BasedRing, is_integral, verify_axioms
from ..exact import is_square


class AxiomFailure(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Rank3Params:
    k: int
    l: int
    m: int
    n: int

    def satisfies_relation(self) -> bool:
        k, l, m, n = astuple(self)
        return k * k + l * l == k * n + l * m + 1

    def label(self) -> str:
        return "K({},{},{},{})".format(*astuple(self))


@dataclass(frozen=True, order=True)
class Rank4Params:
    c: int
    e: int
    k: int
    l: int
    p: int
    q: int

    def relations(self) -> tuple[bool, bool, bool, bool]:
        c, e, k, l, p, q = astuple(self)
        return (
            k * l + l * c == l * p + k * q,
            k * p + l * e + k * c == 2 * l * q + k * k,
            l * l + c * c == 1 + q * q + p * p,
            l * l + k * k + q * q == 1 + 2 * p * k + q * e,
        )

    def satisfies_relations(self) -> bool:
        return all(self.relations())

    def label(self) -> str:
        return "K({},{},{},{},{},{})".format(*astuple(self))


def enumerate_rank3(bound: int) -> list[Rank3Params]:
    """All (k,l,m,n) in [0,bound]^4 with l >= k and k^2 + l^2 = kn + lm + 1."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    out = []
    for k, l, m, n in product(range(bound + 1), repeat=4):
        if l >= k and k * k + l * l == k * n + l * m + 1:
            out.append(Rank3Params(k, l, m, n))
    return out


def enumerate_rank4(bound: int) -> list[Rank4Params]:
    """All (c,e,k,l,p,q) in [0,bound]^6 satisfying the four rank-4 relations."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    out = []
    r = range(bound + 1)
    for c, l, p, q in product(r, repeat=4):
        # l^2 + c^2 = 1 + q^2 + p^2 involves no k, e
        if l * l + c * c != 1 + q * q + p * p:
            continue
        for k in r:
            if k * l + l * c != l * p + k * q:
                continue
            for e in r:
                P = Rank4Params(c, e, k, l, p, q)
                if P.satisfies_relations():
                    out.append(P)
    return sorted(out)


def build_rank3(params: Rank3Params, check: bool = True) -> BasedRing:
    k, l, m, n = astuple(params)
    if not params.satisfies_relation():
        raise ValueError(f"{params.label()} violates k^2 + l^2 = kn + lm + 1")
    ring = BasedRing.from_products(
        ["1", "X", "Y"],
        {(1, 1): {0: 1, 1: m, 2: k}, (2, 2): {0: 1, 1: l, 2: n}, (1, 2): {1: k, 2: l}},
        name=params.label(),
    )
    if check:
        v = verify_axioms(ring)
        if not v.ok:
            raise AxiomFailure(f"{params.label()}: {v.axiom} fails at {v.witness}")
    return ring


def build_rank4(params: Rank4Params, check: bool = True) -> BasedRing:
    c, e, k, l, p, q = astuple(params)
    if not params.satisfies_relations():
        raise ValueError(f"{params.label()} violates the rank-4 relations")
    X, Y, Z = 1, 2, 3
    ring = BasedRing.from_products(
        ["1", "X", "Y", "Z"],
        {
            (X, X): {X: p, Y: l, Z: c},
            (X, Y): {X: q, Y: k, Z: l},
            (Y, Y): {0: 1, X: k, Y: e, Z: k},
            (Y, Z): {X: l, Y: k, Z: q},
            (Z, Z): {X: c, Y: l, Z: p},
            (X, Z): {0: 1, X: p, Y: q, Z: p},
        },
        dual=(0, 3, 2, 1),
        name=params.label(),
    )
    if check:
        v = verify_axioms(ring)
        if not v.ok:
            raise AxiomFailure(f"{params.label()}: {v.axiom} fails at {v.witness}")
    return ring


# -- rank-3 integrality -------------------------------------------------------------


@dataclass(frozen=True)
class IntegralityVerdict:
    integral: bool
    reason: str

    def to_json(self) -> dict:
        return {"integral": self.integral, "reason": self.reason}


def rank3_integrality_closed_form(params: Rank3Params) -> IntegralityVerdict:
    k, l, m, n = astuple(params)
    if k != 0:
        return IntegralityVerdict(False, "k > 0: dim X and dim Y coprime forces k = 0")
    if not is_square(m * m + 4):
        return IntegralityVerdict(False, f"m^2 + 4 = {m * m + 4} is not a square")
    if not is_square(n * n + 8):
        return IntegralityVerdict(False, f"n^2 + 8 = {n * n + 8} is not a square")
    return IntegralityVerdict(True, "dim X = 1, dim Y = (n + sqrt(n^2 + 8))/2 integral")


def rank3_integrality_filter(params: Rank3Params) -> IntegralityVerdict:
    """Closed-form square tests cross-checked against certified Perron roots."""
    closed = rank3_integrality_closed_form(params)
    direct = is_integral(build_rank3(params))
    if closed.integral != direct:
        raise AssertionError(f"{params.label()}: closed form says {closed.integral}, Perron roots say {direct}")
    return closed


def _square_differences(c: int) -> list[tuple[int, int]]:
    """All (s, x) with s, x >= 0 and s^2 - x^2 = c, from factor pairs of c."""
    out = []
    for a in range(1, isqrt(c) + 1):
        if c % a == 0:
            b = c // a
            if (a + b) % 2 == 0:
                out.append(((a + b) // 2, (b - a) // 2))
    return sorted(out)


def rank3_family_certificate() -> dict:
    """Integrality of every rank-3 ring, for all parameter values, in closed form.

    k = 0 turns the relation into l(l - m) = 1, so l = 1 and m = 0; then dim Y
    is integral iff n^2 + 8 = s^2, i.e. (s - n)(s + n) = 8.
    """
    m_solutions = [x for _, x in _square_differences(4)]
    n_solutions = [x for _, x in _square_differences(8)]
    return {
        "k_positive": "never integral",
        "k_zero_forces": {"l": 1, "m": 0},
        "m_with_square_m2_plus_4": m_solutions,
        "n_with_square_n2_plus_8": n_solutions,
        "integral_rings": [Rank3Params(0, 1, 0, n).label() for n in n_solutions],
    }
