import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from porism.numeric import (
    CertNumber,
    CertPoly,
    NotASquare,
    Sign,
    as_cert,
    certified_small,
    certify_sign,
    poly_roots,
    poly_sqrt,
)

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=40
)


def test_positive_disc():
    x = as_cert(1) + as_cert("0.001")
    assert certify_sign(x) is Sign.POSITIVE


def test_tiny_value_is_zero_at_tolerance():
    y = CertNumber.approx(0, 1e-30)
    assert certify_sign(y, zero_tolerance=1e-12) is Sign.ZERO


def test_on_conic_residual_certifies_zero():
    # a point constructed on y^2 = x^2 exactly: residual must certify zero
    x = as_cert(Fraction(3, 7))
    resid = x * x - (x * x)
    y = (as_cert(2).sqrt()) ** 2 - as_cert(2)
    assert certify_sign(resid) is Sign.ZERO
    assert certify_sign(y) is Sign.ZERO


def test_undecidable_for_imaginary():
    z = as_cert(complex(0, 1))
    assert certify_sign(z, max_doublings=2) is Sign.UNDECIDABLE


def test_refinement_tightens():
    z = as_cert(2).sqrt() / as_cert(3)
    r0 = z.radius_mpf
    z.refine()
    assert z.radius_mpf < r0


def test_division_by_uncertain_denominator_recovers():
    d = as_cert(1) / (as_cert(10) ** 30)
    x = as_cert(1) / d
    assert x.ensure_radius_below(1e10)


@settings(max_examples=60, deadline=None)
@given(rationals, rationals, rationals, rationals)
def test_ball_contains_exact_value(a, b, c, d):
    # field ops on rational leaves: exact rational oracle must sit in the disc
    x = (as_cert(a) - as_cert(b)) * as_cert(c) + as_cert(a) * as_cert(d)
    exact = (a - b) * c + a * d
    err = abs(complex(exact) - x.value)
    assert err <= float(x.radius_mpf) + 1e-300


@settings(max_examples=30, deadline=None)
@given(rationals, rationals)
def test_division_ball_contains_exact(a, b):
    if b == 0:
        b = Fraction(1, 3)
    x = as_cert(a) / as_cert(b)
    exact = a / b
    assert abs(complex(exact) - x.value) <= float(x.radius_mpf) + 1e-300


def test_sqrt_branch_consistent_under_refinement():
    z = as_cert(-4)
    w = z.sqrt()
    first = w.value
    w.refine()
    w.refine()
    assert abs(w.value - first) < 1e-10
    assert abs(w.value - 2j) < 1e-12


# -- polynomials ---------------------------------------------------------------


def test_poly_sqrt_exact_square():
    p = CertPoly([1, 0, -2, 0, 1])  # (t^2 - 1)^2
    q = poly_sqrt(p)
    vals = [c.value for c in q.coeffs]
    assert abs(vals[0] + 1) < 1e-12
    assert abs(vals[1]) < 1e-12
    assert abs(vals[2] - 1) < 1e-12


def test_poly_sqrt_rejects_non_square():
    with pytest.raises(NotASquare):
        poly_sqrt(CertPoly([1, 0, 1]))  # t^2 + 1 as (at+b)^2 is impossible


def test_poly_sqrt_odd_degree_rejected():
    with pytest.raises(NotASquare):
        poly_sqrt(CertPoly([1, 2, 3, 4]))


def test_poly_sqrt_branch_normalization():
    # sqrt of (  -t - 1 )^2 must come back with positive leading real part
    q = poly_sqrt(CertPoly.from_roots(1, [-1]) * CertPoly.from_roots(1, [-1]))
    assert q.coeffs[-1].value.real > 0


coeff_vals = st.integers(min_value=-9, max_value=9)


@settings(max_examples=50, deadline=None)
@given(st.lists(coeff_vals, min_size=2, max_size=5), st.integers(1, 9))
def test_poly_sqrt_round_trip(coeffs, lead):
    q = CertPoly(coeffs[:-1] + [lead])
    p = q * q
    r = poly_sqrt(p)
    # equality up to the global branch sign
    signs = []
    for a, b in zip(r.coeffs, q.coeffs):
        signs.append(abs((a - b).value) < 1e-9)
    flipped = all(abs((a + b).value) < 1e-9 for a, b in zip(r.coeffs, q.coeffs))
    assert all(signs) or flipped


def test_poly_roots_simple():
    roots = poly_roots(CertPoly([-1, 0, 1]))  # t^2 - 1
    vals = sorted(r.value.real for r, _ in roots)
    assert [m for _, m in roots] == [1, 1]
    assert abs(vals[0] + 1) < 1e-12 and abs(vals[1] - 1) < 1e-12


def test_poly_roots_double():
    roots = poly_roots(CertPoly([4, -4, 1]))  # (t - 2)^2
    assert len(roots) == 1
    root, mult = roots[0]
    assert mult == 2
    assert abs(root.value - 2) < 1e-10


def test_poly_roots_intersection_quartic():
    # parameters of x^2+y^2=5 meeting xy=2, on the chart x=t, y=2/t:
    # t^2 + 4/t^2 = 5  ->  t^4 - 5 t^2 + 4 = 0, roots +-1, +-2
    roots = poly_roots(CertPoly([4, 0, -5, 0, 1]))
    vals = sorted(r.value.real for r, _ in roots)
    assert all(m == 1 for _, m in roots)
    for got, want in zip(vals, [-2, -1, 1, 2]):
        assert abs(got - want) < 1e-10


def test_poly_roots_multiplicities_sum_to_degree():
    p = CertPoly.from_roots(3, [1, 1, -2, 5, 5, 5])
    roots = poly_roots(p)
    assert sum(m for _, m in roots) == 6
    by_mult = sorted(m for _, m in roots)
    assert by_mult == [1, 2, 3]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-8, 8), min_size=2, max_size=6))
def test_poly_roots_conjugation_symmetry(coeffs):
    coeffs = coeffs + [1]
    p = CertPoly(coeffs)
    roots = poly_roots(p)
    vals = [r.value for r, m in roots for _ in range(m)]
    for v in vals:
        assert any(abs(v.conjugate() - w) < 1e-6 * (1 + abs(v)) for w in vals)


def test_poly_roots_residual_oracle():
    # every reported root must actually annihilate the polynomial
    p = CertPoly([-6, 11, -6, 1])  # (t-1)(t-2)(t-3)
    for root, mult in poly_roots(p):
        val = p.evaluate(root)
        assert certified_small(val, 1e-9)


def test_certified_small_tolerance_decision():
    assert certified_small(CertNumber.approx(1e-15, 1e-16), 1e-12)
    assert not certified_small(as_cert(Fraction(1, 2)), 1e-12)


def test_chop_keeps_certified_degree():
    p = CertPoly([1, 2, 0])
    assert p.chop().degree == 1
    q = CertPoly([1, 2, Fraction(1, 10) ** 6])
    assert q.chop(1e-12).degree == 2
