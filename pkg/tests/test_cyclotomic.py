
import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from symfusion.cone import ConeBudgetExceeded, cone_span_dim, extreme_rays
from symfusion.cyclotomic import (
    CycloPair,
    RealCycloElement,
    embed_full,
    embed_plus,
    galois_orbits,
    has_root_in_real_cyclotomic,
    l_expansion_of_orbit_sums,
    period_minimal_polynomial,
    positivity_constraints,
    positivity_cone_dim,
    primitive_root,
    ramification_excludes,
    squaring_endomorphism,
    verify_adams_embedding_commutes,
    verify_rank_bound,
)
from symfusion.exact import Poly
from symfusion.verlinde import build_verlinde, build_verlinde_plus, order_of_two_mod_pm1

from conftest import SMALL_PRIMES


def b(p, j):
    return RealCycloElement.basis(p, j)


def P(*high_first):
    return Poly(list(reversed(high_first)))


def lp_cone_dim(A) -> int:
    """dim {x : A x >= 0} = n - rank(implicit equalities), each found by one LP."""
    A = np.array(A, dtype=float)
    n = A.shape[1]
    eq = []
    for i in range(A.shape[0]):
        # maximize a_i x subject to A x >= 0, a_i x <= 1
        res = linprog(-A[i], A_ub=np.vstack([-A, A[i:i + 1]]), b_ub=np.r_[np.zeros(len(A)), 1.0],
                      bounds=[(None, None)] * n, method="highs")
        assert res.status == 0
        if -res.fun < 1e-9:
            eq.append(A[i])
    return n - (np.linalg.matrix_rank(np.array(eq)) if eq else 0)


# -- RealCycloElement arithmetic ----------------------------------------------------------------


def test_basis_reduction():
    assert b(7, 6) == b(7, 1)
    assert b(7, 4) == b(7, 3)
    assert b(5, 5) == 2


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_sum_of_even_basis_is_minus_one(p):
    h = (p - 1) // 2
    s = RealCycloElement(p)
    for l in range(1, h + 1):
        s = s + b(p, 2 * l)
    assert s == -1 and s.is_rational() and s.rational_value() == -1


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_numeric_values(p):
    z = mpmath.exp(2j * mpmath.pi / p)
    x = b(p, 1) * b(p, 2) + 3
    assert abs(x.mp_value() - ((z + 1 / z) * (z**2 + z**-2) + 3).real) < 1e-12


@settings(max_examples=150)
@given(
    st.sampled_from([5, 7, 11, 13]),
    st.data(),
)
def test_canonical_reduction_multiplicative(p, data):
    h = (p - 1) // 2
    coeffs = st.lists(st.integers(-5, 5), min_size=h, max_size=h)
    x = RealCycloElement(p, data.draw(st.integers(-5, 5)), data.draw(coeffs))
    y = RealCycloElement(p, data.draw(st.integers(-5, 5)), data.draw(coeffs))
    # raw exponent bookkeeping, reduced once at the end
    raw = {}
    const = x.const * y.const
    for i, a in enumerate(x.coeffs, 1):
        raw[i] = raw.get(i, 0) + a * y.const
        for j, c in enumerate(y.coeffs, 1):
            raw[i + j] = raw.get(i + j, 0) + a * c
            raw[i - j] = raw.get(i - j, 0) + a * c
    for j, c in enumerate(y.coeffs, 1):
        raw[j] = raw.get(j, 0) + c * x.const
    assert x * y == RealCycloElement.from_exponents(p, raw, const)
    assert abs((x * y).value() - x.value() * y.value()) < 1e-7
    assert (x * y) == (y * x) and (x + y) - y == x


def test_canonical_representative_is_sparse():
    # 1 = -(b1 + b2 + b3) for p = 7
    x = RealCycloElement(7, 0, [-1, -1, -1])
    assert x.const == 1 and x.coeffs == (0, 0, 0)


# -- orbits ---------------------------------------------------------------------------


def test_orbits_p13_m2():
    d = galois_orbits(13, 2)
    assert d.k == 3 and set(d.subgroup) == {1, 5}
    assert sorted(d.orbits) == [(1, 5), (2, 3), (4, 6)]
    assert d.orbits[-1] == (1, 5)
    assert galois_orbits(13, 2, "even").orbits[0] == (1, 5)


def test_orbits_p7_m3():
    d = galois_orbits(7, 3)
    assert d.k == 1 and d.orbits == ((1, 2, 3),)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_orbits_m1_singletons(p):
    d = galois_orbits(p, 1)
    assert d.k == (p - 1) // 2 and all(len(o) == 1 for o in d.orbits)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_orbits_partition_and_subgroup(p):
    h = (p - 1) // 2
    g = primitive_root(p)
    assert len({pow(g, i, p) for i in range(p - 1)}) == p - 1
    for m in (d for d in range(1, h + 1) if h % d == 0):
        d = galois_orbits(p, m)
        flat = sorted(j for o in d.orbits for j in o)
        assert flat == list(range(1, h + 1))
        # H_m: classes of x with x^m = +-1, brute force
        brute = sorted({min(x, p - x) for x in range(1, p) if pow(x, m, p) in (1, p - 1)})
        assert list(d.subgroup) == brute
        with pytest.raises(ValueError):
            galois_orbits(p, h + 1)


def test_galois_bad_parity():
    with pytest.raises(ValueError):
        galois_orbits(13, 2, "both")


# -- embeddings -----------------------------------------------------------------------------


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_embed_plus_examples(p):
    assert embed_plus(p, {1: 1}) == 1
    assert embed_plus(p, {3: 1}) == b(p, 2) + 1
    assert embed_plus(p, {p - 2: 1}) == -b(p, 1)
    assert str(embed_plus(p, {p - 2: 1})) == "-b1"


def test_embed_plus_rejects_even():
    with pytest.raises(ValueError):
        embed_plus(7, {2: 1})


def test_embed_full_examples():
    assert embed_full(7, {2: 1}) == CycloPair(RealCycloElement(7), b(7, 1))
    assert embed_full(7, {1: 1}) == CycloPair(RealCycloElement(7, 1), RealCycloElement(7))
    got = embed_full(5, {4: 1})
    assert got == CycloPair(RealCycloElement(5), b(5, 1) + b(5, 3))
    assert got.second == -1


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_embeddings_multiplicative(p):
    Vp = build_verlinde_plus(p)
    for s in Vp.indices:
        for t in Vp.indices:
            prod = Vp.labels_of(Vp.L(s) * Vp.L(t))
            assert embed_plus(p, prod) == embed_plus(p, {s: 1}) * embed_plus(p, {t: 1})
    V = build_verlinde(p)
    for s in V.indices:
        for t in V.indices:
            prod = V.labels_of(V.L(s) * V.L(t))
            lhs = embed_full(p, prod)
            rhs = embed_full(p, {s: 1}) * embed_full(p, {t: 1})
            assert lhs == rhs
            # the split components multiply componentwise
            (a1, a2), (b1, b2), (c1, c2) = lhs.split(), embed_full(p, {s: 1}).split(), embed_full(p, {t: 1}).split()
            assert a1 == b1 * c1 and a2 == b2 * c2


def test_squaring_examples():
    sq5, sq7 = squaring_endomorphism(5), squaring_endomorphism(7)
    assert sq5(b(5, 1)) == b(5, 2)
    assert sq7(b(7, 3)) == b(7, 1)
    assert sq7(RealCycloElement(7, 1)) == 1


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_squaring_order_and_stability(p):
    h = (p - 1) // 2
    sq = squaring_endomorphism(p)
    n = order_of_two_mod_pm1(p)
    x = b(p, 1)
    y = x
    for i in range(1, n + 1):
        y = sq(y)
        assert (y == x) == (i == n)
    for m in (d for d in range(1, h + 1) if h % d == 0):
        d = galois_orbits(p, m)
        if min(2, p - 2) in d.subgroup or 2 in d.subgroup:
            sums = set(d.sums)
            assert {sq(s) for s in d.sums} == sums


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_adams_embedding_commutes(p):
    assert verify_adams_embedding_commutes(p)["ok"]


# -- L-expansions and positivity cones ---------------------------------------------------------


def test_l_expansion_p7_m3():
    (e,) = l_expansion_of_orbit_sums(7, 3)
    assert set(e.values()) <= {-1, 0, 1}
    assert embed_plus(7, e) == b(7, 1) + b(7, 2) + b(7, 3)


def test_l_expansion_p13_m2():
    exps = l_expansion_of_orbit_sums(13, 2)
    assert len(exps) == 3
    for e in exps:
        pos = sum(1 for c in e.values() if c > 0)
        neg = sum(1 for c in e.values() if c < 0)
        assert pos == neg or 11 in e


@pytest.mark.parametrize("p", SMALL_PRIMES)
@pytest.mark.parametrize("parity", ["odd", "even"])
def test_l_expansions_reproduce_orbit_sums(p, parity):
    h = (p - 1) // 2
    for m in (d for d in range(1, h + 1) if h % d == 0):
        d = galois_orbits(p, m, parity)
        for e, x in zip(l_expansion_of_orbit_sums(p, m, parity), d.sums):
            assert all(t % 2 == (1 if parity == "odd" else 0) for t in e)
            if parity == "odd":
                assert embed_plus(p, e) == x
            else:
                assert embed_full(p, e) == CycloPair(RealCycloElement(p), x)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_m1_expansions_are_single_differences(p):
    for e in l_expansion_of_orbit_sums(p, 1):
        assert e == {p - 2: -1} or (len(e) == 2 and sorted(e.values()) == [-1, 1])


def test_extreme_rays_orthant():
    assert extreme_rays([[1, 0], [0, 1]]) == [(0, 1), (1, 0)]
    assert extreme_rays([[1, 0], [0, 1], [-1, -1]]) == []
    assert cone_span_dim([[1, -1], [0, 1], [1, 0]]) == 2


def test_extreme_rays_budget():
    with pytest.raises(ConeBudgetExceeded):
        A = [[1 if i == j else 0 for j in range(6)] for i in range(6)] + [[1, -1, 1, -1, 1, -1]]
        extreme_rays(A, max_rays=2)


@settings(max_examples=60)
@given(st.integers(2, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n + 4)))
def test_cone_dim_matches_lp(A):
    from symfusion.exact import rank

    if rank(A) < len(A[0]):
        return
    assert cone_span_dim(A) == lp_cone_dim(A)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_positivity_cone_dims_match_lp(p):
    h = (p - 1) // 2
    for m in (d for d in range(1, h + 1) if h % d == 0):
        for parity in ("odd", "even"):
            A = positivity_constraints(p, m, parity)
            assert positivity_cone_dim(p, m, parity) == lp_cone_dim(A)


def test_positivity_examples():
    assert positivity_cone_dim(13, 2) < 3
    assert positivity_cone_dim(29, 2) < 7
    assert positivity_cone_dim(11, 1) == 5


def test_rank_bound_reports():
    r7 = verify_rank_bound(7)
    assert r7["ok"]
    assert any("out of scope" in e["status"] for e in r7["subfields"] if e["k"] == 1)
    r13 = verify_rank_bound(13)
    assert r13["ok"] and sorted(e["k"] for e in r13["subfields"] if e["status"] == "checked") == [2, 3]
    r29 = verify_rank_bound(29)
    assert r29["ok"] and sorted(e["k"] for e in r29["subfields"] if e["status"] == "checked") == [2, 7]


# -- roots in Q(z + 1/z) --------------------------------------------------------------------


def test_sqrt5_in_p5():
    cert = has_root_in_real_cyclotomic(P(1, 0, -5), 5)
    assert cert.has_root
    w = cert.witness
    assert w * w == 5
    assert w in (2 * b(5, 1) + 1, -(2 * b(5, 1) + 1))


def test_sqrt21_nowhere():
    from symfusion.verlinde import is_prime

    for p in (q for q in range(5, 101) if is_prime(q)):
        assert not has_root_in_real_cyclotomic(P(1, 0, -21), p).has_root
        assert not has_root_in_real_cyclotomic(P(1, 0, -21), p, prefilter=False).has_root


def test_ver7_cubic():
    f = P(1, -2, -1, 1)
    cert = has_root_in_real_cyclotomic(f, 7)
    assert cert.has_root
    w = cert.witness
    assert w * w * w - 2 * w * w - w + 1 == 0


def test_linear_factor_rational_witness():
    cert = has_root_in_real_cyclotomic(P(1, -3, 2), 11)
    assert cert.has_root and cert.witness.is_rational()


def test_period_polynomial_p13_m2():
    g = period_minimal_polynomial(13, 2)
    assert g.degree == 3
    for x in galois_orbits(13, 2).sums:
        assert abs(g.eval_float(x.value())) < 1e-9


def test_prefilter_agrees_with_norm_route():
    from symfusion.verlinde import is_prime

    polys = [P(1, 0, -5), P(1, -1, -1), P(1, -2, -1, 1), P(1, -3, -3), P(1, 0, -13), P(1, 1, -4, -1), P(1, 0, -2)]
    for f in polys:
        for p in (q for q in range(5, 50) if is_prime(q)):
            a = has_root_in_real_cyclotomic(f, p, prefilter=True).has_root
            c = has_root_in_real_cyclotomic(f, p, prefilter=False).has_root
            assert a == c
            if ramification_excludes(f, p):
                assert not c


@pytest.mark.parametrize("p,expected", [(5, True), (13, True), (17, True), (7, False), (11, False)])
def test_quadratic_subfield_is_sqrt_p(p, expected):
    # Q(sqrt(p)) lies in Q(z+1/z) exactly when p = 1 mod 4
    assert has_root_in_real_cyclotomic(P(1, 0, -p), p).has_root is expected
