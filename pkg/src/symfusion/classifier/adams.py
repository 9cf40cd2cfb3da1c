"""Search for integer endomorphisms satisfying the formal constraints of a second Adams operation."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from ..based_ring import (
    BasedRing,
    RingEndomorphism,
    endo_order,
    endo_power_relation,
    image_rank,
    is_invertible,
)

DEFAULT_SEARCH_BUDGET = 5 * 10**6

SUPER_TANNAKIAN_FLAG = "psi^a = psi^(a-1): super Tannakian only; requires categorical input, not decided here"
IDENTITY_REASON = "psi_2 is the identity"
ODD_ORDER_REASON = "odd order with exactly two self-dual basis elements"


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, message: str, estimate: int):
        super().__init__(message)
        self.estimate = estimate


def _symbol_names(ring: BasedRing) -> list[list[Optional[str]]]:
    """Names of the matrix entries, following the usual rank-3/rank-4 conventions."""
    n = ring.rank
    names: list[list[Optional[str]]] = [[None] * n for _ in range(n)]
    if n == 3 and all(d == i for i, d in enumerate(ring.dual)):
        names[0][1], names[1][1], names[2][1] = "eps1", "alpha", "beta"
        names[0][2], names[1][2], names[2][2] = "eps2", "gamma", "delta"
    elif n == 4 and ring.dual == (0, 3, 2, 1):
        for col, letter in ((1, "alpha"), (3, "gamma")):
            for row in (1, 2, 3):
                names[row][col] = f"{letter}{row}"
        names[0][2] = "eps"
        for row in (1, 2, 3):
            names[row][2] = f"beta{row}"
    else:
        for i in range(n):
            for j in range(n):
                if j != ring.unit:
                    names[i][j] = f"a{i}{j}"
    return names


@dataclass(frozen=True, eq=False)
class AdamsCandidate:
    endo: RingEndomorphism
    symbols: dict[str, int]

    @property
    def ring(self) -> BasedRing:
        return self.endo.ring

    def to_json(self) -> dict:
        return {"images": self.endo.describe(), "symbols": dict(self.symbols)}


def _symbols(ring: BasedRing, M: np.ndarray) -> dict[str, int]:
    names = _symbol_names(ring)
    out = {}
    for i in range(ring.rank):
        for j in range(ring.rank):
            if names[i][j] is not None:
                out[names[i][j]] = int(M[i, j])
    return out


def _column_choices(ring: BasedRing, j: int, bound: int) -> list[tuple[int, ...]]:
    """Images of b_j allowed by the unit-multiplicity and mod-2 rules."""
    sq = ring.N[j, j]
    cols = []
    per_entry = []
    for i in range(ring.rank):
        if i == ring.unit:
            per_entry.append([1, -1] if ring.dual[j] == j else [0])
        else:
            par = int(sq[i]) % 2
            per_entry.append([v for v in range(-bound, bound + 1) if v % 2 == par])
    for col in product(*per_entry):
        cols.append(col)
    return cols


def _free_columns(ring: BasedRing) -> list[int]:
    """Non-unit basis indices whose image is not determined by duality."""
    free = []
    for j in range(ring.rank):
        if j == ring.unit:
            continue
        d = ring.dual[j]
        if d < j:
            continue
        free.append(j)
    return free


def search_space_size(ring: BasedRing, coeff_bound: int) -> int:
    size = 1
    for j in _free_columns(ring):
        size *= len(_column_choices(ring, j, coeff_bound))
    return size


def adams_candidate_search(
    ring: BasedRing, coeff_bound: int = 2, budget: int = DEFAULT_SEARCH_BUDGET
) -> list[AdamsCandidate]:
    """All endomorphisms with entries in [-B, B] obeying the Adams constraints, in lexicographic order."""
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    if not ring.is_commutative():
        raise ValueError("the search needs a commutative ring")
    est = search_space_size(ring, coeff_bound)
    if est > budget:
        raise SearchBudgetExceeded(f"{est} candidate matrices exceed the budget {budget}", est)
    n, u = ring.rank, ring.unit
    free = _free_columns(ring)
    choices = [_column_choices(ring, j, coeff_bound) for j in free]
    N = ring.N
    d = list(ring.dual)
    out = []
    for cols in product(*choices):
        M = np.zeros((n, n), dtype=np.int64)
        M[u, u] = 1
        for j, col in zip(free, cols):
            M[:, j] = col
            if d[j] != j:
                # psi(b*) = psi(b)*
                M[:, d[j]] = np.array(col)[d]
        if any(d[j] == j and any(M[i, j] != M[d[i], j] for i in range(n)) for j in range(n)):
            continue
        # multiplicativity: psi(b_i) psi(b_j) = psi(b_i b_j)
        lhs = np.einsum("ai,bj,abl->ijl", M, M, N)
        rhs = np.einsum("ijk,lk->ijl", N, M)
        if not np.array_equal(lhs, rhs):
            continue
        endo = RingEndomorphism(ring, tuple(tuple(int(x) for x in row) for row in M))
        out.append(AdamsCandidate(endo, _symbols(ring, M)))
    out.sort(key=lambda c: c.endo.matrix)
    return out


def parity_ok(c: AdamsCandidate) -> bool:
    r = c.ring
    return all(
        all((a - b) % 2 == 0 for a, b in zip(c.endo.image(j).coeffs, (r.basis(j) * r.basis(j)).coeffs))
        for j in range(r.rank)
    )


@dataclass(frozen=True)
class CandidateProfile:
    invertible: bool
    order: Optional[int]
    image_rank: int
    power_relations: tuple[int, ...]
    eliminated_by: tuple[str, ...]
    flags: tuple[str, ...]

    @property
    def eliminated(self) -> bool:
        return bool(self.eliminated_by)

    def to_json(self) -> dict:
        return {
            "invertible": self.invertible,
            "order": self.order,
            "image_rank": self.image_rank,
            "power_relations": list(self.power_relations),
            "eliminated_by": list(self.eliminated_by),
            "flags": list(self.flags),
        }


def classify_candidate(c: AdamsCandidate, max_order: int = 12) -> CandidateProfile:
    f = c.endo
    inv = is_invertible(f)
    order = endo_order(f, max_order) if inv else None
    order = order if isinstance(order, int) else None
    rels = tuple(a for a in range(2, max_order + 1) if endo_power_relation(f, a, a - 1))
    elim, flags = [], []
    if f.is_identity():
        elim.append(IDENTITY_REASON)
    elif order is not None and order % 2 == 1 and len(f.ring.self_dual()) == 2:
        elim.append(ODD_ORDER_REASON)
    if rels:
        flags.append(SUPER_TANNAKIAN_FLAG)
    rk = image_rank(f)
    if rk == 1:
        flags.append("image of rank 1 (Im psi_2 = Z)")
    return CandidateProfile(inv, order, rk, rels, tuple(elim), tuple(flags))


def admissible_adams_orders(p: int, max_n: int) -> list[int]:
    """All n <= max_n with 2^n = +-1 mod p."""
    from ..verlinde import check_prime

    p = check_prime(p)
    return [n for n in range(1, max_n + 1) if pow(2, n, p) in (1, p - 1)]
