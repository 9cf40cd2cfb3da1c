"""Command-line interface: ``symfusion <group> <command> [options]``."""
from __future__ import annotations

import argparse
import contextlib
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from .based_ring import (
    BasedRing,
    algebraic_closed_form,
    decomposition_type,
    fpdim_total,
    fpdims,
    verify_axioms,
)
from .classifier import (
    SearchBudgetExceeded,
    adams_candidate_search,
    classify_candidate,
    classify_rank3_pipeline,
    classify_rank4_pipeline,
    fpdim_field_obstruction,
    identify,
    rank3_summary,
    rank4_summary,
)
from .cone import ConeBudgetExceeded
from .cyclotomic import (
    embed_full,
    embed_plus,
    galois_orbits,
    l_expansion_of_orbit_sums,
    verify_rank_bound,
)
from .based_ring import endo_check, endo_order
from .exact import root_minimal_polynomial
from .verlinde import (
    BudgetExceeded,
    InvalidPrime,
    adams_verlinde,
    adams_verlinde_plus,
    build_verlinde,
    build_verlinde_plus,
    check_prime,
    fixed_nonneg_points,
    is_prime,
    verify_verlinde,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
TOOL = "symfusion"


class UsageError(Exception):
    pass


class RingFileError(ValueError):
    pass


# -- ring files -----------------------------------------------------------------------------

_SCHEMA_KEYS = ("rank", "labels", "unit", "dual", "N")


def parse_ring(text: str) -> BasedRing:
    """Parse the canonical ring JSON; errors name the byte offset or the offending field."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise RingFileError(f"JSON parse error at byte offset {offset}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise RingFileError("ring file must hold a JSON object")
    missing = [k for k in _SCHEMA_KEYS if k not in obj]
    if missing:
        raise RingFileError(f"missing field(s): {', '.join(missing)}")
    n = obj["rank"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise RingFileError("rank must be a positive integer")
    labels, dual, unit, N = obj["labels"], obj["dual"], obj["unit"], obj["N"]
    if not (isinstance(labels, list) and len(labels) == n and all(isinstance(x, str) for x in labels)):
        raise RingFileError(f"labels must be {n} strings")
    if not (isinstance(dual, list) and len(dual) == n and all(_is_int(x) and 0 <= x < n for x in dual)):
        raise RingFileError(f"dual must list {n} indices in 0..{n - 1}")
    if not (_is_int(unit) and 0 <= unit < n):
        raise RingFileError(f"unit must be an index in 0..{n - 1}")
    if not (isinstance(N, list) and len(N) == n):
        raise RingFileError(f"N must be an {n}x{n}x{n} array")
    for i, plane in enumerate(N):
        if not (isinstance(plane, list) and len(plane) == n):
            raise RingFileError(f"N[{i}] must have {n} rows")
        for j, row in enumerate(plane):
            if not (isinstance(row, list) and len(row) == n):
                raise RingFileError(f"N[{i}][{j}] must have {n} entries")
            for k, x in enumerate(row):
                if not _is_int(x):
                    raise RingFileError(f"N[{i}][{j}][{k}] is not an integer")
                if x < 0:
                    raise RingFileError(f"N[{i}][{j}][{k}] = {x} is negative")
    return BasedRing(tuple(labels), unit, tuple(dual), np.array(N, dtype=np.int64))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def load_ring(path: str, skip_verify: bool = False) -> BasedRing:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise RingFileError(f"invalid UTF-8 at byte offset {exc.start}") from None
    ring = parse_ring(text)
    if not skip_verify:
        v = verify_axioms(ring)
        if not v.ok:
            raise RingFileError(f"axiom failure: {v.axiom} at indices {list(v.witness)}")
    return ring


# -- argument helpers ----------------------------------------------------------------------------


def parse_primes(spec: str) -> list[int]:
    """'5..100' or '5,7,11' (ranges and lists may be mixed)."""
    out = set()
    for part in spec.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\.\.(\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            out.update(q for q in range(max(lo, 5), hi + 1) if is_prime(q))
        elif part.isdigit():
            q = int(part)
            if not is_prime(q) or q < 5:
                raise UsageError(f"{q} is not a prime >= 5")
            out.add(q)
        else:
            raise UsageError(f"cannot parse prime list {spec!r}")
    if not out:
        raise UsageError(f"prime list {spec!r} is empty")
    return sorted(out)


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*L_?(\d+)\s*")


def parse_label_combination(text: str) -> dict[int, int]:
    """'L5 - L7 + 2L9' -> {5: 1, 7: -1, 9: 2}."""
    out: dict[int, int] = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse element {text!r} near position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) else 1
        t = int(m.group(3))
        out[t] = out.get(t, 0) + sign * coeff
        pos = m.end()
    return {t: c for t, c in sorted(out.items()) if c}


def _prime(value: str) -> int:
    try:
        return check_prime(int(value))
    except (ValueError, InvalidPrime) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _nonneg(value: str) -> int:
    v = int(value)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# -- command implementations ------------------------------------------------------------------


@dataclass
class Outcome:
    results: list
    ok: bool = True
    table: list[str] = field(default_factory=list)


def cmd_verlinde_build(a) -> Outcome:
    results, table = [], []
    for p in a.p:
        V = build_verlinde_plus(p) if a.plus else build_verlinde(p)
        results.append({"p": p, "plus": a.plus, "ring": V.ring.to_json_obj()})
        table.append(f"{V.ring.name}: rank {V.ring.rank}")
        for i in range(V.ring.rank):
            for j in range(i, V.ring.rank):
                prod = V.ring.basis(i) * V.ring.basis(j)
                table.append(f"  {V.ring.labels[i]} * {V.ring.labels[j]} = {prod}")
    return Outcome(results, True, table)


def cmd_verlinde_verify(a) -> Outcome:
    results = [verify_verlinde(p) for p in a.p]
    table = []
    for r in results:
        table.append(f"p={r['p']}: {'PASS' if r['ok'] else 'FAIL'}  (order of psi on Ver_p^+ = {r['plus_adams_order']})")
        for name, ok in r["checks"].items():
            table.append(f"  {name:<28} {'ok' if ok else 'FAIL'}")
    return Outcome(results, all(r["ok"] for r in results), table)


def cmd_verlinde_adams(a) -> Outcome:
    results, table, ok = [], [], True
    for p in a.p:
        psi = adams_verlinde_plus(p) if a.plus else adams_verlinde(p)
        ev = endo_check(psi)
        order = endo_order(psi, max_n=a.max_order)
        ok &= ev.ok
        results.append({"p": p, "plus": a.plus, "images": psi.describe(), "check": ev.to_json(), "order": order})
        table.append(f"p={p}{' (plus part)' if a.plus else ''}: order {order}, endo check {'ok' if ev.ok else 'FAIL'}")
        for lab, img in psi.describe().items():
            table.append(f"  psi2({lab}) = {img}")
    return Outcome(results, ok, table)


def cmd_verlinde_fixed(a) -> Outcome:
    results, table, ok = [], [], True
    for p in a.p:
        pts = fixed_nonneg_points(p, a.bound, cap=a.cap, workers=a.workers)
        expected = all(
            all(c == 0 for c in x.coeffs[1:]) for x in pts
        ) and len(pts) == a.bound + 1
        ok &= expected
        results.append({"p": p, "bound": a.bound, "points": [str(x) for x in pts], "only_multiples_of_unit": expected})
        table.append(f"p={p}, bound={a.bound}: {', '.join(str(x) for x in pts)}")
    return Outcome(results, ok, table)


def cmd_galois_orbits(a) -> Outcome:
    data = galois_orbits(a.p, a.m, a.parity)
    exps = l_expansion_of_orbit_sums(a.p, a.m, a.parity)
    res = dict(data.to_json(), l_expansions=[{f"L{t}": c for t, c in e.items()} for e in exps])
    table = [f"p={a.p} m={a.m} k={data.k} parity={a.parity} H={list(data.subgroup)}"]
    for i, (orb, x, e) in enumerate(zip(data.orbits, data.sums, exps), 1):
        expansion = _signed_labels(e)
        table.append(f"  x{i}: orbit {list(orb)}  sum {x}  =  {expansion}")
    return Outcome([res], True, table)


def _signed_labels(e: dict) -> str:
    text = " ".join(f"{'+' if c > 0 else '-'} {abs(c) if abs(c) != 1 else ''}L{t}" for t, c in e.items())
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def cmd_galois_rank_bound(a) -> Outcome:
    results = [verify_rank_bound(p, max_rays=a.max_rays) for p in a.p]
    table = []
    for r in results:
        table.append(f"p={r['p']}: {'PASS' if r['ok'] else 'FAIL'}")
        for e in r["subfields"]:
            if "odd" in e:
                table.append(
                    f"  k={e['k']:<3} m={e['m']:<3} cone dim odd={e['odd']['cone_dim']} "
                    f"even={e['even']['cone_dim']}  [{e['status']}]"
                )
            else:
                table.append(f"  k={e['k']:<3} m={e['m']:<3} [{e['status']}]")
    return Outcome(results, all(r["ok"] for r in results), table)


def cmd_galois_embed(a) -> Outcome:
    x = parse_label_combination(a.element)
    if any(not 1 <= t <= a.p - 1 for t in x):
        raise UsageError(f"labels must lie in 1..{a.p - 1}")
    pair = embed_full(a.p, x)
    res = {"p": a.p, "element": {f"L{t}": c for t, c in x.items()}, "full": [str(pair.first), str(pair.second)]}
    table = [f"p={a.p}: {a.element}", f"  full embedding: {pair}"]
    if all(t % 2 for t in x):
        plus = embed_plus(a.p, x)
        res["plus"] = str(plus)
        table.append(f"  plus embedding: {plus}")
    return Outcome([res], True, table)


def _report_table(reports, summary) -> list[str]:
    lines = []
    for r in reports:
        tag = r.status if r.status != "identified" else f"identified {r.name}"
        if r.isomorphic_to:
            tag += f" (isomorphic to {r.isomorphic_to})"
        if r.extra.get("characteristics"):
            tag += f" [p in {r.extra['characteristics']}]"
        lines.append(f"{r.ring_id:<22} {tag}" + (f": {r.reason}" if r.reason else ""))
    lines.append(f"survivors: {', '.join(summary['survivors'])}")
    for t in summary.get("cubic_field_solutions", []):
        lines.append("cubic-field solution (k,l,m,n,alpha,beta,gamma,delta) = " + str(tuple(t)))
    return lines


def cmd_classify(a) -> Outcome:
    primes = parse_primes(a.primes)
    if a.rank == "rank3":
        reports = classify_rank3_pipeline(a.bound, a.coeff_bound, primes, a.max_order, a.workers)
        summary = rank3_summary(reports)
    else:
        reports = classify_rank4_pipeline(a.bound, a.coeff_bound, primes, a.max_order, a.workers)
        summary = rank4_summary(reports)
    results = [r.to_json() for r in reports] + [{"summary": summary}]
    return Outcome(results, True, _report_table(reports, summary))


def _ring_from(a) -> BasedRing:
    return load_ring(a.ring, skip_verify=getattr(a, "skip_verify", False))


def cmd_ring_verify(a) -> Outcome:
    ring = load_ring(a.ring, skip_verify=True)
    v = verify_axioms(ring)
    ident = identify(ring) if v.ok else None
    res = {"rank": ring.rank, "axioms": v.to_json(), "identified": ident[0] if ident else None}
    table = [f"rank {ring.rank}: axioms {'ok' if v.ok else 'FAIL: ' + str(v.axiom) + ' at ' + str(v.witness)}"]
    if ident:
        table.append(f"  isomorphic to {ident[0]}")
    return Outcome([res], v.ok, table)


def cmd_ring_fpdim(a) -> Outcome:
    ring = _ring_from(a)
    dims = fpdims(ring)
    total = fpdim_total(ring)
    entries = []
    table = []
    for lab, d in zip(ring.labels, dims):
        mp = root_minimal_polynomial(d)
        value = algebraic_closed_form(d)
        entries.append({"label": lab, "value": value, "minimal_polynomial": str(mp), "approx": round(float(d), 12)})
        table.append(f"  FPdim({lab}) = {value}  ~ {float(d):.6f}")
    tot = {
        "value": total.closed_form(),
        "minimal_polynomial": str(total.minimal_polynomial()),
        "approx": round(float(total), 12),
        "routes_agree": True,
    }
    table.append(f"  FPdim total = {tot['value']}  ~ {float(total):.6f}")
    return Outcome([{"dims": entries, "total": tot}], True, table)


def cmd_ring_decomposition(a) -> Outcome:
    ring = _ring_from(a)
    dec = decomposition_type(ring)
    return Outcome([{"decomposition_type": list(dec)}], True, [f"K tensor Q: field degrees {list(dec)}"])


def cmd_ring_adams(a) -> Outcome:
    ring = _ring_from(a)
    cands = adams_candidate_search(ring, a.coeff_bound)
    results, table = [], [f"{len(cands)} candidate(s) with entries in [-{a.coeff_bound}, {a.coeff_bound}]"]
    for c in cands:
        prof = classify_candidate(c, a.max_order)
        results.append(dict(c.to_json(), profile=prof.to_json()))
        imgs = ", ".join(f"psi({k}) = {v}" for k, v in c.endo.describe().items())
        verdict = "eliminated: " + "; ".join(prof.eliminated_by) if prof.eliminated else "admissible"
        table.append(f"  {imgs}  | order {prof.order}, image rank {prof.image_rank}, {verdict}")
        for fl in prof.flags:
            table.append(f"    flag: {fl}")
    return Outcome(results, True, table)


def cmd_ring_obstruct(a) -> Outcome:
    ring = _ring_from(a)
    primes = parse_primes(a.primes)
    obs = fpdim_field_obstruction(ring, primes)
    obs = dict(obs, per_prime={str(p): v for p, v in obs["per_prime"].items()})
    if obs["fails_all"]:
        verdict = (
            f"eliminated in characteristic {obs['range'][0]}..{obs['range'][1]}: FPdim({obs['witness_label']}) "
            f"is a root of {obs['witness_polynomial']}"
        )
    else:
        verdict = "passes for p in " + str([p for p, v in obs["per_prime"].items() if v])
    obs["verdict"] = verdict
    return Outcome([obs], True, [verdict])


# -- parser -----------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    common.add_argument("--workers", type=_positive, default=1)

    parser = argparse.ArgumentParser(prog=TOOL, description="Exact computations with fusion rings.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    def add(sub, name, fn: Callable, help_: str):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn, command=name)
        return p

    v = groups.add_parser("verlinde", help="Verlinde rings and the second Adams operation")
    vs = v.add_subparsers(dest="cmd", required=True)
    p = add(vs, "build", cmd_verlinde_build, "print the fusion table")
    p.add_argument("--p", type=_prime, nargs="+", required=True)
    p.add_argument("--plus", action="store_true", help="odd part only")
    p = add(vs, "verify", cmd_verlinde_verify, "axioms, Adams, dim-mod-p, S^2/L^2 checks")
    p.add_argument("--p", type=_prime, nargs="+", required=True)
    p = add(vs, "adams", cmd_verlinde_adams, "closed-form psi_2")
    p.add_argument("--p", type=_prime, nargs="+", required=True)
    p.add_argument("--plus", action="store_true")
    p.add_argument("--max-order", type=_positive, default=64)
    p = add(vs, "fixed-points", cmd_verlinde_fixed, "nonnegative psi_2-fixed elements")
    p.add_argument("--p", type=_prime, nargs="+", required=True)
    p.add_argument("--bound", type=_positive, default=3)
    p.add_argument("--cap", type=_positive, default=10**15)

    g = groups.add_parser("galois", help="cyclotomic subfields and positivity cones")
    gs = g.add_subparsers(dest="cmd", required=True)
    p = add(gs, "orbits", cmd_galois_orbits, "orbits of H_m and their label expansions")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p = add(gs, "rank-bound", cmd_galois_rank_bound, "positivity-cone dimensions for every proper subfield")
    p.add_argument("--p", type=_prime, nargs="+", required=True)
    p.add_argument("--max-rays", type=_positive, default=20000)
    p = add(gs, "embed", cmd_galois_embed, "image of an element in Q(z+1/z)")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--element", required=True, help="e.g. 'L5 - L7 + L9'")

    c = groups.add_parser("classify", help="rank-3 / rank-4 classification pipelines")
    cs = c.add_subparsers(dest="cmd", required=True)
    for name, cb in (("rank3", 2), ("rank4", 1)):
        p = add(cs, name, cmd_classify, f"{name} pipeline")
        p.set_defaults(rank=name)
        p.add_argument("--bound", type=_positive, default=6)
        p.add_argument("--coeff-bound", type=_positive, default=cb)
        p.add_argument("--primes", default="5..100")
        p.add_argument("--max-order", type=_positive, default=12)

    r = groups.add_parser("ring", help="analyses of a ring file")
    rs = r.add_subparsers(dest="cmd", required=True)
    for name, fn, h in (
        ("verify", cmd_ring_verify, "check the based-ring axioms"),
        ("fpdim", cmd_ring_fpdim, "Frobenius-Perron dimensions"),
        ("decomposition", cmd_ring_decomposition, "field degrees of K tensor Q"),
        ("adams-search", cmd_ring_adams, "bounded Adams-candidate search"),
        ("obstruct", cmd_ring_obstruct, "FP-dimension field obstruction"),
    ):
        p = add(rs, name, fn, h)
        p.add_argument("ring", help="ring JSON file")
        p.add_argument("--skip-verify", action="store_true")
        if name == "adams-search":
            p.add_argument("--coeff-bound", type=_positive, default=2)
            p.add_argument("--max-order", type=_positive, default=12)
        if name == "obstruct":
            p.add_argument("--primes", default="5..100")
    return parser


def _config(a) -> dict:
    # worker count is left out so reports stay byte-identical across pool sizes
    skip = {"func", "format", "output", "workers"}
    cfg = {k: v for k, v in sorted(vars(a).items()) if k not in skip}
    cfg["format"] = a.format
    cfg["deterministic"] = True
    return cfg


def render(a, out: Outcome) -> str:
    if a.format == "table":
        return "\n".join(out.table) + "\n"
    doc = {
        "tool": TOOL,
        "version": __version__,
        "command": f"{a.group} {a.command}",
        "config": _config(a),
        "results": out.results,
    }
    return json.dumps(doc, indent=2, default=str) + "\n"


def run(argv: Optional[list[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        out = a.func(a)
    except (UsageError, RingFileError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (BudgetExceeded, SearchBudgetExceeded, ConeBudgetExceeded) as exc:
        print(f"refused: {exc}", file=stderr)
        return EXIT_BUDGET
    text = render(a, out)
    if a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK if out.ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
