from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equipart.poly import (
    RationalPoly,
    all_real_roots,
    descartes_bound,
    real_roots_in_interval,
    simplest_rational,
    square_free_factorization,
    sturm_count,
)


def test_quadratic_root_on_half_interval():
    p = RationalPoly([2, -3, 1])
    roots = real_roots_in_interval(p, F(0), F(3, 2))
    assert len(roots) == 1
    assert roots[0].value == 1


def test_constant_has_no_roots():
    assert real_roots_in_interval(RationalPoly([5]), F(-3), F(7)) == []


def test_no_real_roots():
    assert real_roots_in_interval(RationalPoly([1, 0, 1]), F(-10), F(10)) == []


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        real_roots_in_interval(RationalPoly([]), F(0), F(1))


def test_endpoints_are_included():
    p = RationalPoly.from_roots([0, 1, 2])
    assert [r.value for r in real_roots_in_interval(p, F(0), F(2))] == [0, 1, 2]


def test_irrational_root_is_isolated_tightly():
    p = RationalPoly([-2, 0, 1])
    roots = real_roots_in_interval(p, F(0), F(2), width=F(1, 2**40))
    assert len(roots) == 1
    z = roots[0]
    assert z.value is None
    assert z.hi - z.lo < F(1, 2**40)
    assert z.lo * z.lo < 2 < z.hi * z.hi


def test_multiplicity_reported():
    p = RationalPoly.from_roots([1, 1, 1, 3])
    roots = all_real_roots(p)
    assert [(r.value, r.multiplicity) for r in roots] == [(1, 3), (3, 1)]
    fac = square_free_factorization(p)
    assert sorted(m for _, m in fac) == [1, 3]


def test_descartes_exact_on_simple_cases():
    p = RationalPoly.from_roots([F(1, 3), F(2, 3)])
    assert descartes_bound(p, F(0), F(1)) == 2
    assert descartes_bound(p, F(1), F(2)) == 0


def test_simplest_rational():
    assert simplest_rational(F(1, 3), F(2, 3)) == F(1, 2)
    assert simplest_rational(F(9, 10), F(21, 10)) == 1
    assert simplest_rational(F(-5, 2), F(-7, 3)) == F(-5, 2)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=6), st.lists(st.integers(1, 3), min_size=6, max_size=6))
def test_isolation_matches_sturm(roots, mults):
    rs = []
    for r, m in zip(roots, mults):
        rs += [r] * m
    p = RationalPoly.from_roots(rs) * RationalPoly([1, 0, 1])  # add a complex pair
    lo, hi = F(-21), F(21)
    found = real_roots_in_interval(p, lo, hi)
    # Sturm counts distinct roots in (lo, hi]; lo is not a root here
    assert len(found) == sturm_count(p, lo, hi)
    assert sorted({r for r in roots}) == [z.value for z in found]
    for z in found:
        assert z.multiplicity == rs.count(z.value)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=2, max_size=8), rationals, rationals)
def test_random_polynomials_against_sturm(coeffs, a, b):
    p = RationalPoly(coeffs)
    if p.degree < 1:
        return
    lo, hi = min(a, b), max(a, b)
    if lo == hi:
        return
    found = real_roots_in_interval(p, lo, hi)
    # shift the left endpoint out of the half-open Sturm interval when it is a root
    expected = sturm_count(p, lo, hi) + (1 if p(lo) == 0 else 0)
    assert len(found) == expected
    for x, y in zip(found, found[1:]):
        assert x.hi <= y.lo
