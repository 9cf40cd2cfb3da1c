"""Factorization over Q by complex-root clustering and subset recombination.

Numerics only propose candidate factors; every factor is confirmed by exact
division, and the final product is re-expanded and compared with the input.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, isqrt

import mpmath

from .poly import Poly, poly_product

DEFAULT_MAX_DEGREE = 12


class UnsupportedDegree(ValueError):
    pass


def factor_rational_poly(p: Poly, max_degree: int = DEFAULT_MAX_DEGREE) -> list[Poly]:
    """Irreducible factors of ``p`` over Q, with multiplicity.

    Factors are primitive integer polynomials with positive leading
    coefficient, sorted by (degree, coefficients). Their product equals ``p``
    up to a rational unit; a constant ``p`` gives ``[]``.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.degree > max_degree:
        raise UnsupportedDegree(f"degree {p.degree} exceeds the factorization cap {max_degree}")
    factors: list[Poly] = []
    for part, mult in p.squarefree_decomposition():
        for f in _factor_squarefree(part.primitive()):
            factors.extend([f] * mult)
    factors.sort(key=lambda f: (f.degree, f.coeffs))
    unit = p.lead / poly_product(factors).lead if factors else p.lead
    if poly_product(factors) * unit != p:
        raise ArithmeticError(f"factorization of {p} failed the re-expansion check")
    return factors


def factor_unit(p: Poly, factors: list[Poly]) -> Fraction:
    return p.lead / poly_product(factors).lead


def _factor_squarefree(f: Poly) -> list[Poly]:
    out = []
    for r in f.rational_roots():
        lin = Poly([-r, 1]).primitive()
        out.append(lin)
        f = (f // lin).primitive()
    if f.degree >= 1:
        out.extend(_recombine(f))
    return out


def _precision_digits(f: Poly) -> int:
    coeffs = f.int_coeffs()
    n = f.degree
    norm2 = isqrt(sum(c * c for c in coeffs)) + 1
    # Mignotte bound on factor coefficients, times the leading coefficient
    bound = comb(n, n // 2) * norm2 * abs(coeffs[-1])
    return 30 + 2 * len(str(bound)) + 2 * n


def _recombine(f: Poly) -> list[Poly]:
    """Factor a primitive squarefree integer polynomial without rational roots."""
    if f.degree <= 1:
        return [f]
    if f.degree <= 3:
        # no rational root and degree <= 3 means irreducible
        return [f]
    dps = _precision_digits(f)
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(int(c)) for c in reversed(f.int_coeffs())]
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        units = _conjugate_units(roots, mpmath.mpf(10) ** (-(dps // 2)))
        found = []
        remaining = f
        lead = int(f.lead)
        size = 1
        while units and remaining.degree >= 2 * size:
            hit = None
            for combo in combinations(range(len(units)), size):
                deg = sum(len(units[i]) for i in combo)
                if deg > remaining.degree // 2 or deg == 0:
                    continue
                cand = _candidate(lead, [r for i in combo for r in units[i]], dps)
                if cand is None:
                    continue
                q, r = divmod(remaining, cand)
                if r.is_zero() and q.is_integral():
                    hit = (combo, cand, q)
                    break
            if hit is None:
                size += 1
                continue
            combo, cand, q = hit
            found.append(cand)
            remaining = q.primitive()
            units = [u for i, u in enumerate(units) if i not in combo]
            lead = int(remaining.lead)
        found.append(remaining)
    return found


def _conjugate_units(roots, tol) -> list[list]:
    """Group roots into real singletons and complex-conjugate pairs."""
    units, used = [], set()
    for i, r in enumerate(roots):
        if i in used:
            continue
        if abs(mpmath.im(r)) < tol:
            units.append([mpmath.mpc(mpmath.re(r), 0)])
            used.add(i)
            continue
        best = min(
            (j for j in range(len(roots)) if j != i and j not in used),
            key=lambda j: abs(roots[j] - mpmath.conj(r)),
        )
        units.append([r, roots[best]])
        used.update((i, best))
    return units


def _candidate(lead: int, roots, dps: int) -> Poly | None:
    """lead * prod(t - r) rounded to integers, made primitive; None if not near-integral."""
    c = [mpmath.mpc(lead)]
    for r in roots:
        nxt = [mpmath.mpc(0)] * (len(c) + 1)
        for i, a in enumerate(c):
            nxt[i + 1] += a
            nxt[i] -= a * r
        c = nxt
    tol = mpmath.mpf(10) ** (-(dps // 4))
    ints = []
    for a in c:
        n = int(mpmath.nint(mpmath.re(a)))
        if abs(a - n) > tol:
            return None
        ints.append(n)
    return Poly(ints).primitive()
