"""Verlinde rings K(Ver_p), K(Ver_p^+) and the closed-form second Adams operation.

Simples are L_1..L_{p-1} externally and 0..p-2 internally.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .based_ring import (
    BasedRing,
    RingElement,
    RingEndomorphism,
    endo_check,
    endo_order,
    verify_axioms,
)

DEFAULT_SCAN_CAP = 10**15


class InvalidPrime(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, estimate: int):
        super().__init__(message)
        self.estimate = estimate


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)) or p < 5:
        raise InvalidPrime(f"p must be a prime >= 5, got {p}")
    return int(p)


def fusion_terms(p: int, r: int, s: int) -> list[int]:
    """Labels t with L_t in L_r L_s."""
    n = min(r, s, p - r, p - s)
    return [abs(r - s) + 2 * i - 1 for i in range(1, n + 1)]


@dataclass(frozen=True, eq=False)
class VerlindeRing:
    """K(Ver_p) (``plus=False``) or its odd part K(Ver_p^+) (``plus=True``)."""

    p: int
    ring: BasedRing
    plus: bool = False

    @property
    def indices(self) -> tuple[int, ...]:
        """External label t of each basis position."""
        return tuple(range(1, self.p, 2)) if self.plus else tuple(range(1, self.p))

    def pos(self, t: int) -> int:
        if not 1 <= t <= self.p - 1 or (self.plus and t % 2 == 0):
            raise IndexError(f"L_{t} is not a basis element of this ring")
        return (t - 1) // 2 if self.plus else t - 1

    def L(self, t: int) -> RingElement:
        return self.ring.basis(self.pos(t))

    def element(self, coeffs: dict[int, int]) -> RingElement:
        """Element from ``{t: coefficient}`` in external labels."""
        v = [0] * self.ring.rank
        for t, c in coeffs.items():
            v[self.pos(t)] += c
        return RingElement(self.ring, tuple(v))

    def labels_of(self, x: RingElement) -> dict[int, int]:
        return {t: c for t, c in zip(self.indices, x.coeffs) if c}


def build_verlinde(p: int) -> VerlindeRing:
    p = check_prime(p)
    n = p - 1
    N = np.zeros((n, n, n), dtype=np.int64)
    for r in range(1, p):
        for s in range(1, p):
            for t in fusion_terms(p, r, s):
                N[r - 1, s - 1, t - 1] = 1
    ring = BasedRing(tuple(f"L{t}" for t in range(1, p)), 0, tuple(range(n)), N, f"Ver{p}")
    return VerlindeRing(p, ring, False)


def build_verlinde_plus(p: int) -> VerlindeRing:
    full = build_verlinde(p)
    odd = list(range(0, p - 1, 2))
    N = full.ring.N[np.ix_(odd, odd, odd)]
    labels = tuple(full.ring.labels[i] for i in odd)
    ring = BasedRing(labels, 0, tuple(range(len(odd))), N, f"Ver{p}+")
    return VerlindeRing(p, ring, True)


def adams_image(p: int, t: int) -> dict[int, int]:
    """psi_2(L_t) as ``{label: coefficient}``; supported on odd labels."""
    sign = 1 if t % 2 else -1
    return {2 * s - 1: sign * (-1) ** (s + 1) for s in range(1, min(t, p - t) + 1)}


def adams_verlinde(p: int) -> RingEndomorphism:
    V = build_verlinde(p)
    return RingEndomorphism.from_images(V.ring, [V.element(adams_image(p, t)) for t in V.indices])


def adams_verlinde_plus(p: int) -> RingEndomorphism:
    """Restriction of psi_2 to K(Ver_p^+); odd labels map into the odd span."""
    V = build_verlinde_plus(p)
    return RingEndomorphism.from_images(V.ring, [V.element(adams_image(p, t)) for t in V.indices])


def order_of_two_mod_pm1(p: int) -> int:
    """Least n >= 1 with 2^n = +-1 mod p."""
    x, n = 2 % p, 1
    while x not in (1, p - 1):
        x = 2 * x % p
        n += 1
    return n


def sym_ext_squares(p: int, t: int) -> tuple[RingElement, RingElement]:
    """(S^2 L_t, Lambda^2 L_t) from the square and psi_2."""
    V = build_verlinde(p)
    if not 1 <= t <= p - 1:
        raise IndexError(f"t must lie in 1..{p - 1}")
    sq = V.L(t) * V.L(t)
    psi = V.element(adams_image(p, t))
    plus, minus = sq + psi, sq - psi
    if any(c % 2 for c in plus.coeffs + minus.coeffs):
        raise ArithmeticError(f"S^2/Lambda^2 of L_{t} are not integral for p={p}")
    S = RingElement(V.ring, tuple(c // 2 for c in plus.coeffs))
    A = RingElement(V.ring, tuple(c // 2 for c in minus.coeffs))
    if not (S.is_nonnegative() and A.is_nonnegative()):
        raise ArithmeticError(f"S^2/Lambda^2 of L_{t} have negative coefficients for p={p}")
    return S, A


@dataclass(frozen=True)
class DimModP:
    ok: bool
    witness: Optional[tuple[int, int]] = None


def dim_mod_p_check(p: int) -> DimModP:
    """L_t -> t mod p is a ring homomorphism K(Ver_p) -> Z/p."""
    p = check_prime(p)
    for r in range(1, p):
        for s in range(r, p):
            if (r * s - sum(fusion_terms(p, r, s))) % p:
                return DimModP(False, (r, s))
    return DimModP(True)


# -- nonnegative fixed points ------------------------------------------------


def _scan_order(p: int) -> list[int]:
    """Even labels first (their rows force zero), odd descending, L_1 last."""
    evens = list(range(2, p, 2))
    odds = list(range(p - 2, 0, -2))
    return [t - 1 for t in evens + odds]


def _fixed_scan(M: np.ndarray, order: list[int], bound: int, prefix: Sequence[int] = ()) -> list[tuple]:
    """All x in [0, bound]^n with M x = 0, by depth-first search with interval pruning."""
    n = len(order)
    cols = M[:, order]
    pos = np.clip(cols, 0, None) * bound
    neg = np.clip(cols, None, 0) * bound
    # suffix sums: achievable range of the unassigned part from depth d on
    rest_max = np.vstack([pos[:, d:].sum(axis=1) for d in range(n + 1)])
    rest_min = np.vstack([neg[:, d:].sum(axis=1) for d in range(n + 1)])
    out = []
    vals = [0] * n

    def feasible(s: np.ndarray, d: int) -> bool:
        return bool(((s + rest_min[d]) <= 0).all() and ((s + rest_max[d]) >= 0).all())

    def rec(d: int, s: np.ndarray):
        if not feasible(s, d):
            return
        if d == n:
            x = [0] * n
            for k, j in enumerate(order):
                x[j] = vals[k]
            out.append(tuple(x))
            return
        choices = [prefix[d]] if d < len(prefix) else range(bound + 1)
        col = cols[:, d]
        for v in choices:
            vals[d] = v
            rec(d + 1, s + v * col)

    rec(0, np.zeros(M.shape[0], dtype=np.int64))
    return out


def fixed_nonneg_points(
    p: int, bound: int, cap: int = DEFAULT_SCAN_CAP, workers: int = 1
) -> list[RingElement]:
    """Every x with coefficients in [0, bound] and psi_2(x) = x, sorted graded-lexicographically."""
    p = check_prime(p)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    estimate = (bound + 1) ** (p - 1)
    if estimate > cap:
        raise BudgetExceeded(
            f"fixed-point scan over {estimate} vectors exceeds cap {cap}", estimate
        )
    V = build_verlinde(p)
    psi = adams_verlinde(p)
    M = np.array(psi.matrix, dtype=np.int64) - np.eye(p - 1, dtype=np.int64)
    order = _scan_order(p)
    # the first p//2 even coordinates are forced to zero; split the first free one
    split = len(range(2, p, 2))
    prefixes = [[0] * split + [v] for v in range(bound + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_fixed_scan, *zip(*[(M, order, bound, pre) for pre in prefixes])))
    else:
        parts = [_fixed_scan(M, order, bound, pre) for pre in prefixes]
    points = sorted({x for part in parts for x in part}, key=lambda x: (sum(x), x))
    return [RingElement(V.ring, x) for x in points]


# -- full verification -------------------------------------------------------


def verify_verlinde(p: int) -> dict:
    """Named checks on K(Ver_p) and psi_2; every value is a bool except the orders."""
    p = check_prime(p)
    V = build_verlinde(p)
    Vp = build_verlinde_plus(p)
    psi = adams_verlinde(p)
    ev = endo_check(psi)
    cols = [psi.image(i).coeffs for i in range(p - 1)]
    odd_support = all(c[t - 1] == 0 for c in cols for t in range(2, p, 2))
    antisym = all(
        psi.image(V.pos(r)) == -psi.image(V.pos(p - r)) for r in range(1, p)
    )
    sym_ok = True
    for t in range(1, p):
        try:
            sym_ext_squares(p, t)
        except ArithmeticError:
            sym_ok = False
            break
    psi_plus = adams_verlinde_plus(p)
    plus_order = endo_order(psi_plus, max_n=p)
    checks = {
        "axioms": verify_axioms(V.ring).ok,
        "axioms_plus": verify_axioms(Vp.ring).ok,
        "adams_ring_hom": ev.is_ring_hom,
        "adams_commutes_with_dual": ev.commutes_with_dual,
        "adams_fixes_unit": ev.fixes_unit,
        "adams_odd_support": odd_support,
        "adams_antisymmetry": antisym,
        "dim_mod_p": dim_mod_p_check(p).ok,
        "sym_ext_nonneg_integral": sym_ok,
        "plus_order_matches": plus_order == order_of_two_mod_pm1(p),
    }
    return {
        "p": p,
        "checks": checks,
        "plus_adams_order": plus_order,
        "order_of_2": order_of_two_mod_pm1(p),
        "ok": all(checks.values()),
    }
