"""Double description method for pointed cones {x : A x >= 0} with exact integer data."""
from __future__ import annotations

from math import gcd
from functools import reduce
from typing import Sequence

from .exact import inverse, rank, primitive_int_vector


class ConeBudgetExceeded(RuntimeError):
    def __init__(self, message: str, estimate: int):
        super().__init__(message)
        self.estimate = estimate


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _primitive(v: list[int]) -> tuple[int, ...]:
    g = reduce(gcd, (abs(x) for x in v), 0)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _independent_rows(A: list[list[int]]) -> list[int]:
    chosen: list[int] = []
    for i in range(len(A)):
        if rank([A[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
    return chosen


def extreme_rays(A: Sequence[Sequence[int]], max_rays: int = 20000) -> list[tuple[int, ...]]:
    """Extreme rays of {x : A x >= 0}, as primitive integer vectors in sorted order.

    The constraint matrix must have full column rank (pointed cone); the
    zero cone gives an empty list.
    """
    A = [list(map(int, row)) for row in A]
    if not A:
        raise ValueError("empty constraint system")
    d = len(A[0])
    basis = _independent_rows(A)
    if len(basis) < d:
        raise ValueError("constraint matrix lacks full column rank; cone is not pointed")
    Binv = inverse([A[i] for i in basis])
    rays = []
    for j in range(d):
        col = [Binv[i, j] for i in range(d)]
        rays.append(primitive_int_vector(col))
        # primitive_int_vector fixes the sign of the first entry; restore the true direction
        if _dot(A[basis[j]], rays[-1]) < 0:
            rays[-1] = tuple(-x for x in rays[-1])
    done = list(basis)
    # zero sets: indices of processed constraints tight at each ray
    zeros = [frozenset(i for i in done if _dot(A[i], r) == 0) for r in rays]
    for i in range(len(A)):
        if i in basis:
            continue
        a = A[i]
        vals = [_dot(a, r) for r in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        zer = [j for j, v in enumerate(vals) if v == 0]
        new_rays = [rays[j] for j in pos + zer]
        new_zeros = [zeros[j] for j in pos] + [zeros[j] | {i} for j in zer]
        if len(pos) * len(neg) + len(new_rays) > max_rays * 50:
            raise ConeBudgetExceeded(
                f"cone update needs {len(pos) * len(neg)} adjacency tests", len(pos) * len(neg)
            )
        for jp in pos:
            for jn in neg:
                common = zeros[jp] & zeros[jn]
                if len(common) < d - 2:
                    continue
                # combinatorial adjacency: no third ray is tight on all of `common`
                if any(
                    common <= zeros[t] for t in range(len(rays)) if t != jp and t != jn
                ):
                    continue
                vp, vn = vals[jp], vals[jn]
                r = [vp * y - vn * x for x, y in zip(rays[jp], rays[jn])]
                new_rays.append(_primitive(r))
                new_zeros.append(common | {i})
        rays, zeros = new_rays, new_zeros
        done.append(i)
        if len(rays) > max_rays:
            raise ConeBudgetExceeded(f"{len(rays)} intermediate rays exceed the budget {max_rays}", len(rays))
    return sorted(set(rays))


def cone_span_dim(A: Sequence[Sequence[int]], max_rays: int = 20000) -> int:
    rays = extreme_rays(A, max_rays)
    return rank(rays) if rays else 0
