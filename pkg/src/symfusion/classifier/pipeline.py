"""Obstruction filters and the rank-3 / rank-4 classification pipelines."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Optional, Sequence


from ..based_ring import (
    BasedRing,
    RingEndomorphism,
    decomposition_type,
    fpdim_total,
    fpdims,
    global_dim_mod_p,
    is_integral,
    verify_axioms,
)
from ..cyclotomic import has_root_in_real_cyclotomic
from ..exact import Poly, root_minimal_polynomial
from ..verlinde import adams_verlinde_plus, build_verlinde_plus, is_prime
from .adams import (
    SearchBudgetExceeded,
    adams_candidate_search,
    classify_candidate,
)
from .params import (
    Rank3Params,
    Rank4Params,
    build_rank3,
    build_rank4,
    enumerate_rank3,
    enumerate_rank4,
    rank3_family_certificate,
    rank3_integrality_filter,
)

DEFAULT_FIELD_PRIMES = tuple(q for q in range(5, 101) if is_prime(q))


# -- isomorphism and catalogue -------------------------------------------------------------


def find_isomorphism(a: BasedRing, b: BasedRing) -> Optional[tuple[int, ...]]:
    """A basis permutation perm (a's i -> b's perm[i]) carrying a's table onto b's."""
    if a.rank != b.rank:
        return None
    n = a.rank
    others = [i for i in range(n) if i != a.unit]
    targets = [i for i in range(n) if i != b.unit]
    for img in permutations(targets):
        perm = [0] * n
        perm[a.unit] = b.unit
        for i, j in zip(others, img):
            perm[i] = j
        if a.relabel(perm).same_table(b):
            return tuple(perm)
    return None


def transport(f: RingEndomorphism, perm: Sequence[int], target: BasedRing) -> RingEndomorphism:
    """Endomorphism of ``target`` obtained from f on the source ring through perm."""
    n = target.rank
    M = [[0] * n for _ in range(n)]
    for j in range(n):
        for i in range(n):
            M[perm[i]][perm[j]] = f.matrix[i][j]
    return RingEndomorphism(target, tuple(tuple(r) for r in M))


@lru_cache(maxsize=None)
def catalogue() -> tuple[tuple[str, BasedRing], ...]:
    return (
        ("Rep(S3)", build_rank3(Rank3Params(0, 1, 0, 1))),
        # X = L5, Y = L3 matches the rank-3 parametrization K(1,1,0,1)
        ("Ver7+", build_verlinde_plus(7).ring.relabel([0, 2, 1])),
        ("Z4", build_rank4(Rank4Params(0, 0, 0, 1, 0, 0))),
        ("Rep(A4)", build_rank4(Rank4Params(1, 2, 1, 0, 0, 0))),
        ("Izumi-Xu", build_rank4(Rank4Params(1, 3, 1, 0, 0, 0))),
    )


def identify(ring: BasedRing) -> Optional[tuple[str, tuple[int, ...]]]:
    for name, ref in catalogue():
        perm = find_isomorphism(ring, ref)
        if perm is not None:
            return name, perm
    return None


def transported_verlinde_adams(ring: BasedRing) -> Optional[RingEndomorphism]:
    """The Ver_7^+ Adams operation moved onto ``ring`` when the two are isomorphic."""
    V = build_verlinde_plus(7).ring
    perm = find_isomorphism(V, ring)
    if perm is None:
        return None
    return transport(adams_verlinde_plus(7), perm, ring)


# -- FP-dimension field obstruction ---------------------------------------------------------


def fpdim_minimal_polynomials(ring: BasedRing) -> list[tuple[str, Poly]]:
    return [(ring.labels[i], root_minimal_polynomial(d)) for i, d in enumerate(fpdims(ring))]


def fpdim_field_obstruction(ring: BasedRing, primes: Iterable[int] = DEFAULT_FIELD_PRIMES) -> dict:
    """Per prime: does every FP dimension lie in Q(z + 1/z)?"""
    primes = list(primes)
    polys = fpdim_minimal_polynomials(ring)
    distinct = []
    for lab, f in polys:
        if f not in [g for _, g in distinct]:
            distinct.append((lab, f))
    per_prime = {}
    witness = None
    for p in primes:
        failing = [
            (lab, f) for lab, f in distinct if f.degree > 1 and not has_root_in_real_cyclotomic(f, p).has_root
        ]
        per_prime[p] = not failing
        if failing and witness is None:
            witness = failing[0]
    fails_all = bool(primes) and not any(per_prime.values())
    return {
        "per_prime": per_prime,
        "fails_all": fails_all,
        "range": [min(primes), max(primes)] if primes else [],
        "witness_label": witness[0] if fails_all else None,
        "witness_polynomial": str(witness[1]) if fails_all else None,
        "minimal_polynomials": {lab: str(f) for lab, f in polys},
    }


# -- reports ---------------------------------------------------------------------------------


@dataclass
class ObstructionReport:
    ring_id: str
    params: tuple[int, ...]
    filters: dict = field(default_factory=dict)
    status: str = "survives"
    reason: Optional[str] = None
    name: Optional[str] = None
    isomorphic_to: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def eliminate(self, reason: str):
        if self.status != "eliminated":
            self.status, self.reason = "eliminated", reason

    def to_json(self) -> dict:
        return {
            "ring": self.ring_id,
            "params": list(self.params),
            "status": self.status,
            "reason": self.reason,
            "name": self.name,
            "isomorphic_to": self.isomorphic_to,
            "filters": self.filters,
            **self.extra,
        }


def _total_dim_json(ring: BasedRing) -> dict:
    t = fpdim_total(ring)
    return {
        "value": t.closed_form(),
        "minimal_polynomial": str(t.minimal_polynomial()),
        "approx": round(float(t), 12),
    }


def _adams_filters(rep: ObstructionReport, ring: BasedRing, coeff_bound: int, max_order: int):
    try:
        cands = adams_candidate_search(ring, coeff_bound)
    except SearchBudgetExceeded as exc:
        rep.filters["adams_exists"] = {"ok": None, "refused": str(exc), "estimate": exc.estimate}
        return []
    rep.filters["adams_exists"] = {
        "ok": bool(cands),
        "coeff_bound": coeff_bound,
        "count": len(cands),
        "witness": None if cands else f"no endomorphism with entries in [-{coeff_bound}, {coeff_bound}]",
    }
    profiles = [classify_candidate(c, max_order) for c in cands]
    rep.filters["adams_orders"] = {
        "ok": any(not pr.eliminated for pr in profiles),
        "candidates": [dict(c.to_json(), profile=pr.to_json()) for c, pr in zip(cands, profiles)],
    }
    return [c for c, pr in zip(cands, profiles) if not pr.eliminated]


def _finish(rep: ObstructionReport, ring: BasedRing, integral: bool, primes, coeff_bound: int, max_order: int):
    live = _adams_filters(rep, ring, coeff_bound, max_order)
    if rep.filters["adams_exists"]["ok"] is False:
        rep.eliminate("no Adams candidate")
    elif rep.filters["adams_exists"]["ok"] and not live:
        rep.eliminate("every Adams candidate excluded (" + "; ".join(sorted({
            r for c in rep.filters["adams_orders"]["candidates"] for r in c["profile"]["eliminated_by"]
        })) + ")")
    if not integral:
        obs = fpdim_field_obstruction(ring, primes)
        rep.filters["fpdim_field"] = {
            "ok": not obs["fails_all"],
            **{k: v for k, v in obs.items() if k != "per_prime"},
            "passing_primes": [p for p, ok in obs["per_prime"].items() if ok],
        }
        if obs["fails_all"]:
            rep.eliminate(
                f"FP dimension of {obs['witness_label']} (root of {obs['witness_polynomial']}) lies in no "
                f"Q(z+1/z) for primes {obs['range'][0]}..{obs['range'][1]}"
            )
        elif rep.status != "eliminated":
            rep.extra["characteristics"] = rep.filters["fpdim_field"]["passing_primes"]
    else:
        rep.filters["fpdim_field"] = {"ok": True, "reason": "rational dimensions"}
        rep.filters["dim_mod_p"] = {
            "ok": True,
            "informational": True,
            "residues": {str(p): global_dim_mod_p(ring, p) for p in (2, 3, 5, 7)},
        }
    ident = identify(ring)
    if ident is not None:
        rep.name = ident[0]
    if rep.status != "eliminated":
        if rep.name is not None:
            rep.status = "identified"
    return live


def _rank3_report(P: Rank3Params, coeff_bound: int, primes, max_order: int) -> ObstructionReport:
    rep = ObstructionReport(P.label(), astuple(P))
    v = verify_axioms(build_rank3(P, check=False))
    rep.filters["axioms"] = v.to_json()
    if not v.ok:
        rep.eliminate(f"axiom failure: {v.axiom}")
        return rep
    ring = build_rank3(P)
    integ = rank3_integrality_filter(P)
    rep.filters["integrality"] = {"ok": integ.integral, "reason": integ.reason, "methods_agree": True}
    dec = decomposition_type(ring)
    rep.extra["decomposition_type"] = list(dec)
    rep.extra["total_dimension"] = _total_dim_json(ring)
    live = _finish(rep, ring, integ.integral, primes, coeff_bound, max_order)
    if dec == (3,):
        k, l, m, n = astuple(P)
        truth = transported_verlinde_adams(ring)
        tuples = []
        for c in live:
            s = c.symbols
            tuples.append(
                {
                    "k": k, "l": l, "m": m, "n": n,
                    "alpha": s["alpha"], "beta": s["beta"], "gamma": s["gamma"], "delta": s["delta"],
                    "eps1": s["eps1"], "eps2": s["eps2"],
                    "matches_transported_verlinde_adams": truth is not None and c.endo == truth,
                }
            )
        rep.extra["cubic_field_tuples"] = tuples
    return rep


def _rank4_report(P: Rank4Params, coeff_bound: int, primes, max_order: int) -> ObstructionReport:
    rep = ObstructionReport(P.label(), astuple(P))
    v = verify_axioms(build_rank4(P, check=False))
    rep.filters["axioms"] = v.to_json()
    if not v.ok:
        rep.eliminate(f"axiom failure: {v.axiom}")
        return rep
    ring = build_rank4(P)
    integral = is_integral(ring)
    rep.filters["integrality"] = {"ok": integral}
    rep.extra["decomposition_type"] = list(decomposition_type(ring))
    rep.extra["total_dimension"] = _total_dim_json(ring)
    _finish(rep, ring, integral, primes, coeff_bound, max_order)
    rep.extra["obstruction_tags"] = _rank4_obstruction_tags(P, rep)
    return rep


def _rank4_obstruction_tags(P: Rank4Params, rep: ObstructionReport) -> list[str]:
    c, e, k, l, p, q = astuple(P)
    tags = []
    if k == 0 and e == 0 and q == 1 and l == 0:
        tags.append("image-Z pattern: forces c^2 = 2 + p^2, which has no integer solutions")
    cands = rep.filters.get("adams_orders", {}).get("candidates", [])
    if any(cand["profile"]["order"] == 2 for cand in cands):
        tags.append("order-2 Adams candidate: only possible for the Izumi-Xu rules (1,3,1,0,0,0)")
    if rep.filters.get("adams_exists", {}).get("ok") is False:
        tags.append("no Adams candidate within the coefficient bound")
    return tags


def _run(fn, items, workers: int, *args):
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(fn, it, *args) for it in items]
            return [f.result() for f in futures]
    return [fn(it, *args) for it in items]


def classify_rank3_pipeline(
    bound: int, coeff_bound: int = 2, primes: Sequence[int] = DEFAULT_FIELD_PRIMES,
    max_order: int = 12, workers: int = 1,
) -> list[ObstructionReport]:
    if bound < 1 or coeff_bound < 1:
        raise ValueError("bounds must be >= 1")
    params = enumerate_rank3(bound)
    reports = _run(_rank3_report, params, workers, coeff_bound, tuple(primes), max_order)
    _mark_isomorphic(reports, params, build_rank3)
    return reports


def classify_rank4_pipeline(
    bound: int, coeff_bound: int = 1, primes: Sequence[int] = DEFAULT_FIELD_PRIMES,
    max_order: int = 12, workers: int = 1,
) -> list[ObstructionReport]:
    if bound < 1 or coeff_bound < 1:
        raise ValueError("bounds must be >= 1")
    params = enumerate_rank4(bound)
    reports = _run(_rank4_report, params, workers, coeff_bound, tuple(primes), max_order)
    _mark_isomorphic(reports, params, build_rank4)
    return reports


def _mark_isomorphic(reports: list[ObstructionReport], params: list, build):
    """Group non-eliminated rings by isomorphism; all but one representative point at it.

    The representative is the ring whose table equals a catalogue entry, else the first one.
    """
    refs = [table for _, table in catalogue()]
    classes: list[list[tuple[ObstructionReport, BasedRing]]] = []
    for rep, P in zip(reports, params):
        if rep.status == "eliminated":
            continue
        ring = build(P)
        for cls in classes:
            if find_isomorphism(ring, cls[0][1]) is not None:
                cls.append((rep, ring))
                break
        else:
            classes.append([(rep, ring)])
    for cls in classes:
        head = next((r for r, ring in cls if any(ring.same_table(t) for t in refs)), cls[0][0])
        for rep, _ in cls:
            rep.isomorphic_to = None if rep is head else head.ring_id


def survivor_classes(reports: Sequence[ObstructionReport]) -> list[ObstructionReport]:
    """One report per isomorphism class of non-eliminated rings."""
    return [r for r in reports if r.status != "eliminated" and r.isomorphic_to is None]


def cubic_field_solutions(reports: Sequence[ObstructionReport]) -> list[tuple[int, ...]]:
    """(k,l,m,n,alpha,beta,gamma,delta) over cubic-field rings with a live Adams candidate."""
    out = []
    for r in reports:
        for t in r.extra.get("cubic_field_tuples", []):
            out.append(tuple(t[s] for s in ("k", "l", "m", "n", "alpha", "beta", "gamma", "delta")))
    return sorted(set(out))


def rank3_summary(reports: Sequence[ObstructionReport]) -> dict:
    return {
        "survivors": [r.ring_id for r in survivor_classes(reports)],
        "cubic_field_solutions": [list(t) for t in cubic_field_solutions(reports)],
        "family_certificate": rank3_family_certificate(),
    }


def rank4_summary(reports: Sequence[ObstructionReport]) -> dict:
    return {"survivors": [r.ring_id for r in survivor_classes(reports)]}
