from fractions import Fraction

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import given, settings
from hypothesis import strategies as st

from symfusion.exact import (
    DimensionError,
    InvalidInput,
    Poly,
    RationalMatrix,
    UnsupportedDegree,
    char_poly,
    discriminant,
    factor_rational_poly,
    int_det,
    inverse,
    isolate_real_roots,
    perron_root,
    poly_product,
    rank_and_kernel,
    resultant,
    root_minimal_polynomial,
    solve,
)

T = sympy.Symbol("t")


def P(*coeffs_high_first):
    return Poly(list(reversed(coeffs_high_first)))


def to_sympy(p: Poly):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], T)


def sympy_factors(p: Poly) -> list[tuple]:
    _, facs = sympy.factor_list(to_sympy(p).as_expr(), T)
    out = []
    for f, m in facs:
        c = sympy.Poly(f, T).all_coeffs()
        if c[0] < 0:
            c = [-x for x in c]
        out.extend([tuple(int(x) for x in reversed(c))] * m)
    return sorted(out, key=lambda c: (len(c), c))


# -- char_poly ---------------------------------------------------------------------------


def test_char_poly_two_by_two():
    assert char_poly([[0, 1], [1, 1]]) == P(1, -1, -1)


def test_char_poly_identity():
    assert char_poly(RationalMatrix.identity(3)) == P(1, -1) ** 3


def test_char_poly_ver7_y(ver7):
    from symfusion.based_ring import fusion_matrix

    assert char_poly(fusion_matrix(ver7, "Y")) == P(1, -2, -1, 1)


def test_char_poly_non_square():
    with pytest.raises(DimensionError):
        char_poly([[1, 2, 3], [4, 5, 6]])


@settings(max_examples=60)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_char_poly_matches_sympy(rows):
    ours = char_poly(rows)
    ref = sympy.Matrix(rows).charpoly(T)
    assert [int(c) for c in reversed(ours.coeffs)] == [int(c) for c in ref.all_coeffs()]
    assert ours.coeffs[0] * (-1) ** len(rows) == int_det(rows)


# -- root isolation ------------------------------------------------------------------------


def test_isolate_sqrt5():
    roots = isolate_real_roots(P(1, 0, -5))
    assert len(roots) == 2
    for r, sign in zip(roots, (-1, 1)):
        assert r.lo * r.lo <= 5 <= r.hi * r.hi or r.lo * r.lo >= 5 >= r.hi * r.hi
        assert r.lo * sign >= 0 and r.hi * sign >= 0
        tight = r.refine(Fraction(1, 2))
        assert 2 <= abs(tight.lo) <= 3 and 2 <= abs(tight.hi) <= 3


def test_isolate_cubic_three_real():
    roots = isolate_real_roots(P(1, -2, -1, 1))
    assert len(roots) == 3
    for r in roots:
        assert r.poly.sign_at(r.lo) * r.poly.sign_at(r.hi) < 0


def test_isolate_no_real_roots():
    assert isolate_real_roots(P(1, 0, 1)) == []


def test_isolate_zero_poly():
    with pytest.raises(InvalidInput):
        isolate_real_roots(Poly())


def test_isolate_rational_roots_exact():
    roots = isolate_real_roots(Poly.from_roots([Fraction(1, 2), -3, 7]))
    assert [r.exact for r in roots] == [-3, Fraction(1, 2), 7]


@settings(max_examples=80)
@given(
    st.lists(st.integers(-30, 30), min_size=1, max_size=5, unique=True),
    st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 20)), max_size=3),
)
def test_sturm_count_on_squarefree_products(linear, quads):
    # (t - a) for each a, and t^2 + b t + c with negative discriminant or not
    f = Poly.from_roots(linear)
    expected = len(linear)
    seen = set(Fraction(a) for a in linear)
    for b, c in quads:
        q = Poly([c, b, 1])
        rr = [r for r in sympy.Poly(T**2 + b * T + c, T).real_roots()]
        if any(sympy.Rational(r) in seen for r in rr if r.is_rational) or len(set(rr)) < len(rr):
            continue
        irr_roots = [r for r in rr]
        if any(sympy.simplify(r - s) == 0 for r in irr_roots for s in seen):
            continue
        f = f * q
        expected += len(irr_roots)
        seen.update(irr_roots)
    if not f.is_squarefree():
        return
    roots = isolate_real_roots(f)
    assert len(roots) == expected == len(sympy.Poly(to_sympy(f).as_expr(), T).real_roots())
    for a, b in zip(roots, roots[1:]):
        assert a.hi < b.lo or (a.is_exact and a.exact < b.lo) or (b.is_exact and a.hi < b.exact)


# -- perron root ---------------------------------------------------------------------------


def test_perron_s3_y(s3):
    from symfusion.based_ring import fusion_matrix

    r = perron_root(fusion_matrix(s3, "Y"))
    assert r.exact == 2


def test_perron_identity():
    assert perron_root(RationalMatrix.identity(4)).exact == 1


def test_perron_izumi_xu(izumi_xu):
    from symfusion.based_ring import fusion_matrix

    r = perron_root(fusion_matrix(izumi_xu, "Y")).refine(Fraction(1, 10**12))
    val = (3 + sympy.sqrt(21)) / 2
    assert r.lo <= val <= r.hi
    assert root_minimal_polynomial(r) == P(1, -3, -3)


def test_perron_negative_rejected():
    with pytest.raises(InvalidInput):
        perron_root([[1, -1], [0, 1]])


@settings(max_examples=40)
@given(st.integers(2, 5).flatmap(lambda n: st.lists(st.lists(st.integers(0, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_perron_dominates_other_eigenvalues(rows):
    if not any(any(r) for r in rows):
        return
    r = perron_root(rows)
    tol = Fraction(1, 10**9)
    r2 = r if r.is_exact else r.refine(tol)
    assert r2.width <= tol
    for other in isolate_real_roots(char_poly(rows)):
        assert other.lo <= r2.hi
    ev = max(abs(complex(e)) for e in sympy.Matrix(rows).eigenvals(multiple=True, rational=False)) if len(rows) <= 3 else None
    if ev is not None:
        assert float(r2.lo) - 1e-6 <= ev <= float(r2.hi) + 1e-6


# -- factorization -------------------------------------------------------------------------


def test_factor_t4_minus_1():
    assert factor_rational_poly(P(1, 0, 0, 0, -1)) == [P(1, -1), P(1, 1), P(1, 0, 1)]


def test_factor_irreducible_cubic():
    assert factor_rational_poly(P(1, -2, -1, 1)) == [P(1, -2, -1, 1)]


def test_factor_golden():
    assert factor_rational_poly(P(1, -1, -1)) == [P(1, -1, -1)]


def test_factor_with_multiplicity():
    f = P(1, -1) ** 3 * P(1, 0, -2) ** 2
    assert factor_rational_poly(f) == [P(1, -1)] * 3 + [P(1, 0, -2)] * 2


def test_factor_degree_cap():
    with pytest.raises(UnsupportedDegree):
        factor_rational_poly(Poly([1] * 14))


def test_factor_swinnerton_dyer_like():
    # irreducible quartic whose reductions split everywhere: t^4 - 10 t^2 + 1
    assert factor_rational_poly(P(1, 0, -10, 0, 1)) == [P(1, 0, -10, 0, 1)]


@settings(max_examples=80)
@given(st.lists(st.integers(-10**4, 10**4), min_size=2, max_size=13).filter(lambda c: c[-1] != 0))
def test_factor_matches_sympy(coeffs):
    f = Poly(coeffs)
    ours = factor_rational_poly(f)
    assert [tuple(int(c) for c in g.coeffs) for g in ours] == sympy_factors(f)
    assert poly_product(ours) * (f.lead / poly_product(ours).lead) == f


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=2, max_size=4).filter(lambda c: c[-1] != 0), min_size=1, max_size=3))
def test_factor_product_of_random_factors(parts):
    f = poly_product([Poly(c) for c in parts])
    ours = factor_rational_poly(f)
    assert poly_product(ours) * (f.lead / poly_product(ours).lead) == f
    assert [tuple(int(c) for c in g.coeffs) for g in ours] == sympy_factors(f)


# -- resultant / discriminant -------------------------------------------------------------------


@settings(max_examples=80)
@given(
    st.lists(st.integers(-20, 20), min_size=2, max_size=6).filter(lambda c: c[-1] != 0),
    st.lists(st.integers(-20, 20), min_size=1, max_size=6).filter(lambda c: c[-1] != 0),
)
def test_resultant_matches_sympy(a, b):
    A, B = Poly(a), Poly(b)
    # Sylvester determinant; sympy.resultant mishandles some monomial inputs
    syl = sylvester(to_sympy(A).as_expr(), to_sympy(B).as_expr(), T)
    assert resultant(A, B) == syl.det()


@settings(max_examples=60)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
def test_discriminant_matches_sympy(c):
    f = Poly(c)
    fs, ds = to_sympy(f).as_expr(), to_sympy(f.derivative()).as_expr()
    n = f.degree
    expected = (-1) ** (n * (n - 1) // 2) * sylvester(fs, ds, T).det() / f.lead if n > 1 else 1
    assert discriminant(f) == expected


def test_discriminant_quadratic():
    assert discriminant(P(1, -3, -3)) == 21


# -- linear algebra ---------------------------------------------------------------------------


def test_rank_kernel_zero():
    r, ker = rank_and_kernel([[0, 0], [0, 0]])
    assert r == 0 and len(ker) == 2


def test_rank_kernel_identity():
    assert rank_and_kernel(RationalMatrix.identity(3)) == (3, [])


def test_rank_kernel_rank_one():
    r, ker = rank_and_kernel([[1, 1], [2, 2]])
    assert r == 1
    assert len(ker) == 1 and ker[0] in ((1, -1), (-1, 1))


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r))))
def test_rank_kernel_matches_sympy(rows):
    r, ker = rank_and_kernel(rows)
    M = sympy.Matrix(rows)
    assert r == M.rank()
    assert len(ker) == M.shape[1] - r
    for v in ker:
        assert all(x == 0 for x in M * sympy.Matrix(v))


def test_inverse_and_solve():
    m = [[2, 1], [1, 1]]
    inv = inverse(m)
    assert inv.rows == ((1, -1), (-1, 2))
    assert solve(m, [3, 2]) == (1, 1)
    assert solve([[1, 1], [1, 1]], [1, 2]) is None


def test_int_det():
    assert int_det([[2, 0, 1], [1, 3, 2], [1, 1, 1]]) == int(sympy.Matrix([[2, 0, 1], [1, 3, 2], [1, 1, 1]]).det())
