import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from porism.geometry import (
    Bitangent,
    Conic,
    DegenerateConic,
    DegenerateDuals,
    HomPoly,
    IncidenceViolation,
    LineParam,
    ProjLine,
    ProjPoint,
    bitangents,
    find_point_on_conic,
    intersect_conics,
    other_intersection,
    parametrize,
    restrict_poly,
    tangent_lines_from_point,
    transform_line,
    transform_point,
)
from porism.numeric import Sign, certified_small, certify_sign, poly_roots

UNIT_CIRCLE = Conic.from_coeffs([1, 0, 1, 0, 0, -1])


def closest(points, target):
    return min(points, key=lambda p: sum(
        abs(a - b) for a, b in
        zip(p.normalized().float_coords(), ProjPoint(target).normalized().float_coords())
    ))


def test_conic_smoothness_enforced():
    with pytest.raises(DegenerateConic):
        Conic.from_coeffs([1, 0, -1, 0, 0, 0])  # x^2 - y^2, a line pair


def test_coeff_round_trip():
    c = Conic.from_coeffs([2, 3, 5, 7, 11, -13])
    got = [x.value.real for x in c.coeffs()]
    assert got == [2, 3, 5, 7, 11, -13]


def test_intersect_transversal_quartet():
    # oracle: x + y = +-3, x - y = +-1 solves x^2+y^2=5, xy=2
    c1 = Conic.from_coeffs([1, 0, 1, 0, 0, -5])
    c2 = Conic.from_coeffs([0, 1, 0, 0, 0, -2])
    inter = intersect_conics(c1, c2)
    assert inter.transversal
    assert sum(m for _, m in inter.points) == 4
    expected = [(2, 1, 1), (1, 2, 1), (-2, -1, 1), (-1, -2, 1)]
    for target in expected:
        pt = closest([p for p, _ in inter.points], target)
        assert pt.equal(ProjPoint(target), 1e-9)


def test_intersect_tangential_pair():
    c1 = UNIT_CIRCLE
    c2 = Conic.from_coeffs([1, 0, 4, 0, 0, -1])
    inter = intersect_conics(c1, c2)
    assert not inter.transversal
    assert sorted(m for _, m in inter.points) == [2, 2]
    for p, _ in inter.points:
        assert abs(p.normalized().float_coords()[1]) < 1e-10  # y = 0


def test_intersect_identical_conics_rejected():
    with pytest.raises(ValueError):
        intersect_conics(UNIT_CIRCLE, Conic.from_coeffs([2, 0, 2, 0, 0, -2]))


def test_tangents_from_external_point():
    # oracle: lines through (2, 0) at distance 1 from the origin have
    # slope m with |2m| = sqrt(1 + m^2), i.e. m = +-1/sqrt(3)
    p = ProjPoint((2, 0, 1))
    lines = tangent_lines_from_point(p, UNIT_CIRCLE)
    assert len(lines) == 2
    root3 = math.sqrt(3)
    targets = [ProjLine((1, root3, -2)), ProjLine((1, -root3, -2))]
    for t in targets:
        assert any(l.equal(t, 1e-9) for l in lines)
    for l in lines:
        assert certified_small(UNIT_CIRCLE.dual_evaluate(l), 1e-10)


def test_tangent_at_on_conic_point_is_polar():
    p = ProjPoint((1, 0, 1))
    lines = tangent_lines_from_point(p, UNIT_CIRCLE)
    assert len(lines) == 1
    assert lines[0].equal(UNIT_CIRCLE.polar(p), 1e-10)


def test_tangents_from_interior_point_conjugate():
    lines = tangent_lines_from_point(ProjPoint((0, 0, 1)), UNIT_CIRCLE)
    assert len(lines) == 2
    a = lines[0].normalized().float_coords()
    b = lines[1].normalized().float_coords()
    assert max(abs(x.imag) for x in a) > 1e-3
    assert all(abs(x.conjugate() - y) < 1e-9 for x, y in zip(a, b))


def test_other_intersection_line_through_circle():
    l = ProjLine((0, 1, 0))
    known = ProjPoint((1, 0, 1))
    other = other_intersection(l, UNIT_CIRCLE, known)
    assert other.equal(ProjPoint((-1, 0, 1)), 1e-10)


def test_other_intersection_tangent_returns_known():
    p = ProjPoint((1, 0, 1))
    tangent = UNIT_CIRCLE.polar(p)
    assert other_intersection(tangent, UNIT_CIRCLE, p).equal(p, 1e-10)


def test_other_intersection_chord():
    c = Conic.from_coeffs([1, 0, 1, 0, 0, -5])
    known = ProjPoint((2, 1, 1))
    chord = ProjLine((1, 1, -3))  # slope -1 through (2, 1)
    assert other_intersection(chord, c, known).equal(ProjPoint((1, 2, 1)), 1e-9)


def test_other_intersection_requires_incidence():
    with pytest.raises(IncidenceViolation):
        other_intersection(ProjLine((0, 1, 0)), UNIT_CIRCLE, ProjPoint((2, 0, 1)))


def test_bitangents_of_two_circles():
    # oracle: distance-1 condition from both centers (0,0) and (4,0)
    c2 = Conic.from_coeffs([1, 0, 1, -8, 0, 15])  # (x-4)^2 + y^2 = 1
    bits = bitangents(UNIT_CIRCLE, c2)
    assert len(bits) == 4
    root3 = math.sqrt(3)
    targets = [
        ProjLine((0, 1, -1)),
        ProjLine((0, 1, 1)),
        ProjLine((1, root3, -2)),
        ProjLine((1, -root3, -2)),
    ]
    for t in targets:
        assert any(b.line.equal(t, 1e-9) for b in bits)
    for b in bits:
        assert UNIT_CIRCLE.contains(b.touch1)
        assert c2.contains(b.touch2)
        assert certified_small(UNIT_CIRCLE.dual_evaluate(b.line), 1e-9)
        assert certified_small(c2.dual_evaluate(b.line), 1e-9)


def test_bitangents_symmetric_in_arguments():
    c2 = Conic.from_coeffs([1, 0, 1, -8, 0, 15])
    a = bitangents(UNIT_CIRCLE, c2)
    b = bitangents(c2, UNIT_CIRCLE)
    for x in a:
        assert any(x.line.equal(y.line, 1e-9) for y in b)


def test_concentric_circles_degenerate_duals():
    inner = UNIT_CIRCLE
    outer = Conic.from_coeffs([1, 0, 1, 0, 0, -4])
    with pytest.raises(DegenerateDuals):
        bitangents(inner, outer)


def test_parametrize_unit_circle_classical():
    base = ProjPoint((-1, 0, 1))
    param = parametrize(UNIT_CIRCLE, base=base)
    # image points lie on the circle and the chart hits (1, 0, 1)
    for t in (Fraction(1, 3), 2, Fraction(-7, 5)):
        assert UNIT_CIRCLE.contains(param.point_at(t))
    t, s = param.param_of(ProjPoint((0, 1, 1)))
    pt = param.point_at(t / s)
    assert pt.equal(ProjPoint((0, 1, 1)), 1e-9)


def test_parametrize_pullback_certifies_zero():
    for coeffs in ([1, 0, 1, 0, 0, -5], [2, 1, 3, 0, 1, -7]):
        c = Conic.from_coeffs(coeffs)
        param = parametrize(c)
        resid = param.pullback_residual()
        assert resid.is_zero(1e-10)


def test_parametrize_rejects_off_conic_base():
    with pytest.raises(IncidenceViolation):
        parametrize(UNIT_CIRCLE, base=ProjPoint((2, 0, 1)))


def test_restrict_line_to_conic_simple_and_tangent():
    param = parametrize(UNIT_CIRCLE)
    secant = HomPoly.from_line(ProjLine((0, 1, 0)))  # y = 0: two points
    poly = restrict_poly(secant, param)
    roots = poly_roots(poly)
    mults = sorted(m for _, m in roots)
    total = sum(mults) + (2 - poly.degree)
    assert total == 2 and all(m == 1 for m in mults)

    tangent = HomPoly.from_line(ProjLine((1, 0, -1)))  # x = 1: tangency
    tpoly = restrict_poly(tangent, param)
    if tpoly.degree == 2:
        troots = poly_roots(tpoly)
        assert [m for _, m in troots] == [2]
    else:
        # the tangency sits at the chart point at infinity
        assert tpoly.degree == 0


def test_restrict_poly_degree_drop_at_infinity_point():
    # choose the base so the chart infinity point is known, then restrict a
    # line through that point: the univariate degree must drop by one
    param = parametrize(UNIT_CIRCLE, base=ProjPoint((-1, 0, 1)))
    inf_pt = param.infinity_point()
    other = ProjPoint((0, -1, 1))
    from porism.geometry import line_through

    l = line_through(inf_pt, other)
    poly = restrict_poly(HomPoly.from_line(l), param)
    assert poly.degree == 1


def test_duality_involution():
    for coeffs in ([1, 0, 1, 0, 0, -1], [3, 1, 2, 0, 1, -4], [1, 0, 2, 1, 0, -3]):
        c = Conic.from_coeffs(coeffs)
        dd = c.dual().dual()
        assert dd.same_as(c)


@settings(max_examples=20, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 4))
def test_bezout_audit(dx, dy, r):
    # random circle against the fixed ellipse: multiplicities always sum to 4
    c1 = Conic.from_coeffs([1, 0, 2, 0, 0, -6])
    coeffs = [1, 0, 1, -2 * dx, -2 * dy, dx * dx + dy * dy - r]
    try:
        c2 = Conic.from_coeffs(coeffs)
    except DegenerateConic:
        return
    inter = intersect_conics(c1, c2)
    assert sum(m for _, m in inter.points) == 4


def test_point_normalization_and_keys():
    p = ProjPoint((3, -6, 2))
    n = p.normalized().float_coords()
    assert max(abs(c) for c in n) == pytest.approx(1.0)
    assert p.equal(ProjPoint((-3, 6, -2)))
    assert not p.equal(ProjPoint((1, 1, 1)))


def test_projective_transform_preserves_incidence():
    a = ((1, 2, 0), (0, 1, 1), (1, 0, 3))
    c = Conic.from_coeffs([1, 0, 1, 0, 0, -5])
    p = ProjPoint((2, 1, 1))
    assert c.contains(p)
    ct = c.transform(a)
    pt = transform_point(a, p)
    assert ct.contains(pt)
    l = ProjLine((1, 1, -3))
    lt = transform_line(a, l)
    from porism.geometry import incidence

    assert certified_small(incidence(pt.normalized(), lt.normalized()), 1e-9)


def test_find_point_on_conic_is_on_conic():
    for coeffs in ([1, 0, 1, 0, 0, -1], [5, 1, 2, 1, 1, -9]):
        c = Conic.from_coeffs(coeffs)
        assert c.contains(find_point_on_conic(c))


def test_line_param_round_trip():
    l = ProjLine((2, -1, 3))
    param = LineParam(l)
    p = param.point_at(Fraction(5, 7))
    t, s = param.param_of(p)
    assert certified_small(t / s - Fraction(5, 7), 1e-10)
